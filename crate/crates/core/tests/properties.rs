//! Property tests for the exact arithmetic layer: the field and ring axioms
//! the rest of the engine silently relies on.

use proptest::prelude::*;

use ratloop::exact::poly::Poly;
use ratloop::exact::ratfun::{MoebiusChart, Rf};
use ratloop::exact::scalar::Gq;

fn arb_gq() -> impl Strategy<Value = Gq> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(re, im, den)| {
        &Gq::from_ints(re, im) * &Gq::ratio(1, den)
    })
}

fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(arb_gq(), 0..=max_deg + 1).prop_map(Poly::new)
}

/// Rational functions with denominators split over small Gaussian integers.
fn arb_rf() -> impl Strategy<Value = Rf> {
    let root = (-1i64..=1, -2i64..=2).prop_map(|(re, im)| Gq::from_ints(re, im));
    (
        arb_poly(3),
        prop::collection::vec((root, 1u32..=2), 0..=2),
    )
        .prop_map(|(numer, denom)| Rf::from_parts(Gq::one(), numer, denom))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gq_field_axioms(a in arb_gq(), b in arb_gq(), c in arb_gq()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn rf_evaluation_is_a_homomorphism(f in arb_rf(), g in arb_rf()) {
        // 20 sample points skipping poles
        let mut checked = 0;
        let mut t = 2i64;
        while checked < 20 {
            let x = Gq::from_int(t);
            t += 1;
            if f.pole_order(&x) > 0 || g.pole_order(&x) > 0 {
                continue;
            }
            let fs = f.eval(&x).unwrap();
            let gs = g.eval(&x).unwrap();
            prop_assert_eq!((&f + &g).eval(&x).unwrap(), &fs + &gs);
            prop_assert_eq!((&f * &g).eval(&x).unwrap(), &fs * &gs);
            checked += 1;
        }
    }

    #[test]
    fn rf_conj_coeff_laws(f in arb_rf(), g in arb_rf()) {
        prop_assert_eq!(f.conj_coeff().conj_coeff(), f.clone());
        prop_assert_eq!((&f * &g).conj_coeff(), &f.conj_coeff() * &g.conj_coeff());
    }

    #[test]
    fn rf_pole_order_subadditive(f in arb_rf(), g in arb_rf()) {
        if f.is_zero() || g.is_zero() {
            return Ok(());
        }
        let prod = &f * &g;
        let mut roots: Vec<Gq> = f.denom_factors().iter().map(|(r, _)| r.clone()).collect();
        for (r, _) in g.denom_factors() {
            if !roots.contains(r) {
                roots.push(r.clone());
            }
        }
        for r in roots {
            let sum = f.pole_order(&r) + g.pole_order(&r);
            prop_assert!(prod.pole_order(&r) <= sum);
            // equality unless a numerator vanishes at the root
            if !f.numer().eval(&r).is_zero() && !g.numer().eval(&r).is_zero() {
                prop_assert_eq!(prod.pole_order(&r), sum);
            }
        }
    }

    #[test]
    fn laurent_of_products_is_cauchy(f in arb_rf(), g in arb_rf()) {
        let chart = MoebiusChart::new(Gq::from_ints(1, 2)).unwrap();
        let lo = -4i64;
        let hi = 4i64;
        let cf = f.laurent(&chart, lo, hi);
        let cg = g.laurent(&chart, lo, hi);
        let cp = (&f * &g).laurent(&chart, lo, hi);
        // indices where the full convolution window is covered
        for j in -1..=1i64 {
            let mut acc = Gq::zero();
            for a in lo..=hi {
                let b = j - a;
                if (lo..=hi).contains(&b) {
                    acc = &acc + &(&cf[(a - lo) as usize] * &cg[(b - lo) as usize]);
                }
            }
            prop_assert_eq!(&acc, &cp[(j - lo) as usize]);
        }
    }
}
