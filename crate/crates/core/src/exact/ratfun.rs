//! Rational functions of one variable over Q(i), denominators kept in
//! factored linear form.
//!
//! The canonical representation is `scale * numer / prod (x - r)^m` with a
//! monic numerator sharing no root with the denominator and factors sorted
//! by the canonical order on Q(i). Keeping denominators factored makes pole
//! orders, evaluation, and cancellation exact constant-time bookkeeping;
//! only inversion ever needs to factor a polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::exact::roots::gaussian_roots;
use crate::exact::scalar::Gq;

/// The chart mu(lambda) = (lambda - alpha)/(lambda - conj(alpha)), a
/// bijection of the sphere sending alpha -> 0, conj(alpha) -> infinity,
/// infinity -> 1. All Laurent expansions are taken in this variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MoebiusChart {
    alpha: Gq,
}

impl MoebiusChart {
    pub fn new(alpha: Gq) -> Result<Self> {
        if alpha.is_real() {
            return Err(Error::SpecInvalid(
                "Moebius chart requires a non-real center".into(),
            ));
        }
        Ok(MoebiusChart { alpha })
    }

    pub fn alpha(&self) -> &Gq {
        &self.alpha
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Rf {
    scale: Gq,
    numer: Poly,
    denom: Vec<(Gq, u32)>,
}

fn sort_factors(f: &mut [(Gq, u32)]) {
    f.sort_by(|a, b| a.0.cmp(&b.0));
}

impl Rf {
    /// Canonicalize scale * numer / prod(x-r)^m, cancelling shared roots.
    fn assemble(scale: Gq, numer: Poly, denom: Vec<(Gq, u32)>) -> Rf {
        if scale.is_zero() || numer.is_zero() {
            return Rf::zero();
        }
        // merge repeated roots before cancelling
        let mut denom_merged: Vec<(Gq, u32)> = Vec::with_capacity(denom.len());
        for (root, mult) in denom {
            match denom_merged.iter_mut().find(|(r, _)| *r == root) {
                Some(entry) => entry.1 += mult,
                None => denom_merged.push((root, mult)),
            }
        }
        let denom = denom_merged;
        let (lead, mut monic) = numer.monic();
        let mut scale = &scale * &lead;
        let mut out: Vec<(Gq, u32)> = Vec::with_capacity(denom.len());
        for (root, mult) in denom {
            debug_assert!(mult > 0);
            let shared = monic.root_multiplicity(&root).min(mult);
            if shared > 0 {
                monic = monic
                    .div_exact(&Poly::linear(&root).pow(shared))
                    .expect("shared root divides");
            }
            if mult > shared {
                out.push((root, mult - shared));
            }
        }
        // Cancellation can expose a new leading coefficient only through
        // exact division of a monic by a monic, so monic stays monic.
        debug_assert!(monic.leading().is_one());
        let _ = &mut scale;
        sort_factors(&mut out);
        Rf {
            scale,
            numer: monic,
            denom: out,
        }
    }

    pub fn zero() -> Rf {
        Rf {
            scale: Gq::zero(),
            numer: Poly::one(),
            denom: vec![],
        }
    }

    pub fn one() -> Rf {
        Rf::constant(Gq::one())
    }

    pub fn constant(c: Gq) -> Rf {
        if c.is_zero() {
            return Rf::zero();
        }
        Rf {
            scale: c,
            numer: Poly::one(),
            denom: vec![],
        }
    }

    pub fn from_poly(p: &Poly) -> Rf {
        Rf::assemble(Gq::one(), p.clone(), vec![])
    }

    /// From a numerator polynomial and an already-factored denominator.
    pub fn from_parts(scale: Gq, numer: Poly, denom: Vec<(Gq, u32)>) -> Rf {
        Rf::assemble(scale, numer, denom)
    }

    /// Canonical form of numer/denom; the denominator must split over Q(i).
    pub fn normalize(numer: &Poly, denom: &Poly) -> Result<Rf> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let roots = gaussian_roots(denom)?;
        let lead_inv = denom.leading().inv()?;
        Ok(Rf::assemble(lead_inv, numer.clone(), roots))
    }

    /// The coefficient function (lambda - alpha)/(lambda - conj alpha).
    pub fn mu(chart: &MoebiusChart) -> Rf {
        let a = chart.alpha();
        Rf::assemble(
            Gq::one(),
            Poly::linear(a),
            vec![(a.conj(), 1)],
        )
    }

    /// (lambda - conj alpha)/(lambda - alpha).
    pub fn mu_inv(chart: &MoebiusChart) -> Rf {
        let a = chart.alpha();
        Rf::assemble(Gq::one(), Poly::linear(&a.conj()), vec![(a.clone(), 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.numer.is_one() && self.denom.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.numer.is_one() && self.denom.is_empty()
    }

    pub fn scale(&self) -> &Gq {
        &self.scale
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom_factors(&self) -> &[(Gq, u32)] {
        &self.denom
    }

    pub fn expanded_denominator(&self) -> Poly {
        let mut d = Poly::one();
        for (root, mult) in &self.denom {
            d = &d * &Poly::linear(root).pow(*mult);
        }
        d
    }

    /// Multiplicity of alpha among the denominator factors.
    pub fn pole_order(&self, alpha: &Gq) -> u32 {
        self.denom
            .iter()
            .find(|(r, _)| r == alpha)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }

    /// Vanishing order at a non-pole point; the function must be nonzero.
    pub fn zero_order(&self, alpha: &Gq) -> u32 {
        debug_assert!(!self.is_zero());
        self.numer.root_multiplicity(alpha)
    }

    pub fn eval(&self, x: &Gq) -> Result<Gq> {
        if self.pole_order(x) > 0 {
            return Err(Error::EvalAtPole);
        }
        let mut v = &self.scale * &self.numer.eval(x);
        for (root, mult) in &self.denom {
            let base = (x - root).inv().expect("non-pole");
            for _ in 0..*mult {
                v = &v * &base;
            }
        }
        Ok(v)
    }

    /// Value at infinity: 0 when deg numer < deg denom, the scale when they
    /// agree (denominator monic), and a pole error otherwise.
    pub fn eval_infinity(&self) -> Result<Gq> {
        if self.is_zero() {
            return Ok(Gq::zero());
        }
        let dn = self.numer.degree().unwrap();
        let dd: u32 = self.denom.iter().map(|(_, m)| m).sum();
        match dn.cmp(&(dd as usize)) {
            std::cmp::Ordering::Less => Ok(Gq::zero()),
            std::cmp::Ordering::Equal => Ok(self.scale.clone()),
            std::cmp::Ordering::Greater => Err(Error::EvalAtPole),
        }
    }

    pub fn finite_at_infinity(&self) -> bool {
        self.eval_infinity().is_ok()
    }

    /// Conjugate every coefficient: the unique rational function with
    /// f*(conj lambda) = conj(f(lambda)) away from poles.
    pub fn conj_coeff(&self) -> Rf {
        let mut denom: Vec<(Gq, u32)> = self
            .denom
            .iter()
            .map(|(r, m)| (r.conj(), *m))
            .collect();
        sort_factors(&mut denom);
        Rf {
            scale: self.scale.conj(),
            numer: self.numer.conj_coeffs(),
            denom,
        }
    }

    /// f(-lambda).
    pub fn subst_neg(&self) -> Rf {
        if self.is_zero() {
            return Rf::zero();
        }
        let total_mult: u32 = self.denom.iter().map(|(_, m)| m).sum();
        let numer = self.numer.subst_neg();
        let (lead, monic) = numer.monic();
        let mut scale = &self.scale * &lead;
        if total_mult % 2 == 1 {
            scale = -scale;
        }
        let mut denom: Vec<(Gq, u32)> = self.denom.iter().map(|(r, m)| (-r, *m)).collect();
        sort_factors(&mut denom);
        Rf {
            scale,
            numer: monic,
            denom,
        }
    }

    pub fn inv(&self) -> Result<Rf> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let new_denom = gaussian_roots(&self.numer)?;
        let mut numer = Poly::one();
        for (root, mult) in &self.denom {
            numer = &numer * &Poly::linear(root).pow(*mult);
        }
        Ok(Rf::assemble(self.scale.inv()?, numer, new_denom))
    }

    pub fn div(&self, rhs: &Rf) -> Result<Rf> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Rf {
        let mut acc = Rf::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Laurent coefficients c_j of f(lambda(mu)) at mu = 0 for j in
    /// [j_lo, j_hi], where mu is the chart variable.
    pub fn laurent(&self, chart: &MoebiusChart, j_lo: i64, j_hi: i64) -> Vec<Gq> {
        assert!(j_lo <= j_hi);
        let width = (j_hi - j_lo + 1) as usize;
        if self.is_zero() {
            return vec![Gq::zero(); width];
        }
        let alpha = chart.alpha();
        let abar = alpha.conj();

        // lambda(mu) = (alpha - abar*mu)/(1 - mu); each x - r becomes
        // ((alpha - r) + (r - abar) mu)/(1 - mu).
        let one_minus_mu = Poly::new(vec![Gq::one(), -Gq::one()]);
        let top = Poly::new(vec![alpha.clone(), -&abar]);

        let d = self.numer.degree().unwrap();
        // Horner for sum c_k top^k (1-mu)^(d-k): descend in k, multiplying
        // by top and accumulating tail powers, so each step is linear work.
        let mut num_p = Poly::constant(self.numer.coeff(d));
        let mut tail_pow = Poly::one();
        for k in (0..d).rev() {
            tail_pow = &tail_pow * &one_minus_mu;
            num_p = &(&num_p * &top) + &tail_pow.scale(&self.numer.coeff(k));
        }

        let total_mult: u32 = self.denom.iter().map(|(_, m)| m).sum();
        let mut den_p = Poly::one();
        for (root, mult) in &self.denom {
            let b = Poly::new(vec![alpha - root, root - &abar]);
            den_p = &den_p * &b.pow(*mult);
        }
        // Balance the (1 - mu) powers between numerator and denominator.
        if (total_mult as usize) >= d {
            num_p = &num_p * &one_minus_mu.pow(total_mult - d as u32);
        } else {
            den_p = &den_p * &one_minus_mu.pow(d as u32 - total_mult);
        }
        num_p = num_p.scale(&self.scale);

        // Strip mu-powers and divide power series.
        let a = num_p.root_multiplicity(&Gq::zero());
        let b = den_p.root_multiplicity(&Gq::zero());
        let num_p = num_p
            .div_exact(&Poly::lambda().pow(a))
            .expect("mu-power divides");
        let den_p = den_p
            .div_exact(&Poly::lambda().pow(b))
            .expect("mu-power divides");
        let shift = a as i64 - b as i64;

        let mut out = vec![Gq::zero(); width];
        if j_hi < shift {
            return out;
        }
        let order = (j_hi - shift) as usize;
        let series = series_div(&num_p, &den_p, order);
        for (idx, c) in series.into_iter().enumerate() {
            let j = shift + idx as i64;
            if j >= j_lo && j <= j_hi {
                out[(j - j_lo) as usize] = c;
            }
        }
        out
    }
}

/// Power-series quotient num/den to the given order; den(0) must be nonzero.
fn series_div(num: &Poly, den: &Poly, order: usize) -> Vec<Gq> {
    let d0 = den.coeff(0);
    debug_assert!(!d0.is_zero());
    let d0_inv = d0.inv().expect("den(0) nonzero");
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num.coeff(k);
        for t in 1..=k {
            acc = &acc - &(&den.coeff(t) * &out[k - t]);
        }
        out.push(&acc * &d0_inv);
    }
    out
}

/// Free-function form of the expansion used throughout the driver layer.
pub fn moebius_laurent(f: &Rf, chart: &MoebiusChart, j_lo: i64, j_hi: i64) -> Vec<Gq> {
    f.laurent(chart, j_lo, j_hi)
}

impl<'a, 'b> Add<&'b Rf> for &'a Rf {
    type Output = Rf;
    fn add(self, rhs: &'b Rf) -> Rf {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Common denominator: max multiplicity per root.
        let mut common: Vec<(Gq, u32)> = self.denom.clone();
        for (root, mult) in &rhs.denom {
            match common.iter_mut().find(|(r, _)| r == root) {
                Some(entry) => entry.1 = entry.1.max(*mult),
                None => common.push((root.clone(), *mult)),
            }
        }
        sort_factors(&mut common);
        let cofactor = |own: &[(Gq, u32)]| -> Poly {
            let mut p = Poly::one();
            for (root, mult) in &common {
                let have = own
                    .iter()
                    .find(|(r, _)| r == root)
                    .map(|(_, m)| *m)
                    .unwrap_or(0);
                if *mult > have {
                    p = &p * &Poly::linear(root).pow(mult - have);
                }
            }
            p
        };
        let left = (&self.numer * &cofactor(&self.denom)).scale(&self.scale);
        let right = (&rhs.numer * &cofactor(&rhs.denom)).scale(&rhs.scale);
        Rf::assemble(Gq::one(), &left + &right, common)
    }
}

impl<'a, 'b> Sub<&'b Rf> for &'a Rf {
    type Output = Rf;
    fn sub(self, rhs: &'b Rf) -> Rf {
        self + &(-rhs)
    }
}

impl<'a, 'b> Mul<&'b Rf> for &'a Rf {
    type Output = Rf;
    fn mul(self, rhs: &'b Rf) -> Rf {
        if self.is_zero() || rhs.is_zero() {
            return Rf::zero();
        }
        let mut denom = self.denom.clone();
        for (root, mult) in &rhs.denom {
            match denom.iter_mut().find(|(r, _)| r == root) {
                Some(entry) => entry.1 += mult,
                None => denom.push((root.clone(), *mult)),
            }
        }
        Rf::assemble(
            &self.scale * &rhs.scale,
            &self.numer * &rhs.numer,
            denom,
        )
    }
}

impl Neg for &Rf {
    type Output = Rf;
    fn neg(self) -> Rf {
        Rf {
            scale: -&self.scale,
            numer: self.numer.clone(),
            denom: self.denom.clone(),
        }
    }
}

impl fmt::Display for Rf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "({}) * [{}]", self.scale, self.numer)?;
        for (root, mult) in &self.denom {
            write!(f, " / (x - ({}))^{}", root, mult)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Rf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart_i() -> MoebiusChart {
        MoebiusChart::new(Gq::i()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        // (x^2 + 1)/(x + i) cancels to x - i.
        let numer = Poly::new(vec![Gq::one(), Gq::zero(), Gq::one()]);
        let denom = Poly::linear(&(-Gq::i()));
        let f = Rf::normalize(&numer, &denom).unwrap();
        assert!(f.denom_factors().is_empty());
        assert_eq!(f.numer(), &Poly::linear(&Gq::i()));
        assert!(f.scale().is_one());

        // 1/(x^2+1) has factored denominator [(-i,1),(i,1)].
        let f = Rf::normalize(&Poly::one(), &numer).unwrap();
        assert_eq!(
            f.denom_factors(),
            &[(-Gq::i(), 1), (Gq::i(), 1)]
        );

        // 0/(x-3) is the zero function.
        let f = Rf::normalize(&Poly::zero(), &Poly::linear(&Gq::from_int(3))).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn eval_examples() {
        // f = (x - i)/(x + i); hand evaluation (-i)/(i) = -1 at 0.
        let f = Rf::normalize(&Poly::linear(&Gq::i()), &Poly::linear(&(-Gq::i()))).unwrap();
        assert_eq!(f.eval(&Gq::zero()).unwrap(), Gq::from_int(-1));
        assert_eq!(f.eval_infinity().unwrap(), Gq::one());
        assert!(f.eval(&(-Gq::i())).is_err());
        assert_eq!(Rf::one().eval(&Gq::from_ints(7, -2)).unwrap(), Gq::one());
    }

    #[test]
    fn conj_coeff_examples() {
        let f = Rf::normalize(&Poly::linear(&Gq::i()), &Poly::linear(&(-Gq::i()))).unwrap();
        let g = f.conj_coeff();
        assert_eq!(g.denom_factors(), &[(Gq::i(), 1)]);
        assert_eq!(g.conj_coeff(), f); // involution

        // f = i*x: conj is -i*x, and f*(conj z) = conj f(z).
        let f = Rf::from_poly(&Poly::new(vec![Gq::zero(), Gq::i()]));
        let g = f.conj_coeff();
        let z = Gq::i();
        assert_eq!(
            g.eval(&z.conj()).unwrap(),
            f.eval(&z).unwrap().conj()
        );
        assert_eq!(g.eval(&z.conj()).unwrap(), Gq::from_int(-1));
    }

    #[test]
    fn laurent_examples() {
        let ch = chart_i();
        // f = mu itself: c_1 = 1, everything else 0.
        let f = Rf::mu(&ch);
        assert_eq!(
            f.laurent(&ch, -2, 3),
            vec![
                Gq::zero(),
                Gq::zero(),
                Gq::zero(),
                Gq::one(),
                Gq::zero(),
                Gq::zero()
            ]
        );
        // f = 1: c_0 only.
        assert_eq!(
            Rf::one().laurent(&ch, -1, 1),
            vec![Gq::zero(), Gq::one(), Gq::zero()]
        );
        // f = mu^{-1}: c_{-1} only.
        let f = Rf::mu_inv(&ch);
        assert_eq!(
            f.laurent(&ch, -2, 1),
            vec![Gq::zero(), Gq::one(), Gq::zero(), Gq::zero()]
        );
    }

    #[test]
    fn laurent_cauchy_product() {
        let ch = chart_i();
        let f = Rf::normalize(
            &Poly::new(vec![Gq::from_ints(1, 1), Gq::from_int(2), Gq::one()]),
            &Poly::linear(&Gq::i()),
        )
        .unwrap();
        let g = Rf::normalize(
            &Poly::new(vec![Gq::from_int(-1), Gq::from_ints(0, 3)]),
            &Poly::linear(&Gq::from_ints(2, -1)),
        )
        .unwrap();
        let lo = -3i64;
        let hi = 4i64;
        let cf = f.laurent(&ch, lo, hi);
        let cg = g.laurent(&ch, lo, hi);
        let cfg = (&f * &g).laurent(&ch, lo, hi);
        // Compare on a window where the product's sum is fully covered.
        for j in 0..=2i64 {
            let mut acc = Gq::zero();
            for a in lo..=hi {
                let b = j - a;
                if b < lo || b > hi {
                    continue;
                }
                acc = &acc + &(&cf[(a - lo) as usize] * &cg[(b - lo) as usize]);
            }
            assert_eq!(acc, cfg[(j - lo) as usize], "coefficient {j}");
        }
    }

    #[test]
    fn pole_orders() {
        let f = Rf::from_parts(
            Gq::one(),
            Poly::one(),
            vec![(Gq::i(), 2)],
        );
        assert_eq!(f.pole_order(&Gq::i()), 2);
        assert_eq!(f.pole_order(&Gq::from_ints(0, 2)), 0);
        let g = Rf::normalize(&Poly::linear(&Gq::i()), &Poly::linear(&(-Gq::i()))).unwrap();
        assert_eq!(g.pole_order(&(-Gq::i())), 1);
    }

    #[test]
    fn inv_and_arithmetic() {
        let ch = chart_i();
        let f = Rf::mu(&ch);
        let g = f.inv().unwrap();
        assert!((&f * &g).is_one());
        let h = &(&f + &g) - &f;
        assert_eq!(h, g);
        // evaluation is a homomorphism at non-poles
        let x = Gq::from_ints(3, 2);
        let sum = &f + &g;
        assert_eq!(
            sum.eval(&x).unwrap(),
            &f.eval(&x).unwrap() + &g.eval(&x).unwrap()
        );
    }

    #[test]
    fn subst_neg_matches_pointwise() {
        let f = Rf::normalize(
            &Poly::new(vec![Gq::from_ints(2, -1), Gq::i(), Gq::one()]),
            &Poly::linear(&Gq::from_ints(1, 2)),
        )
        .unwrap();
        let g = f.subst_neg();
        for x in [Gq::from_int(2), Gq::from_ints(0, 3), Gq::from_ints(-1, 1)] {
            assert_eq!(g.eval(&x).unwrap(), f.eval(&(-&x)).unwrap());
        }
    }
}
