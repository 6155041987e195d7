//! The affine extension of the exceptional algebra in 8x8 block form: the
//! semidirect sum with translations, its two commuting involutions, the
//! torus elements of the associated integrable system, and the curvature of
//! the one-parameter connection family for constant coefficient data.

use crate::error::{Error, Result};
use crate::exact::scalar::Gq;
use crate::linalg::matrix::{Mat, VecC};
use crate::octonion::{g2_lie_relations, nu};

/// An element of the affine algebra: block matrix
/// (C -t(B) X; B nu(C) Y; 0 0 0) whose 7x7 block is a derivation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineG2 {
    m: Mat,
}

impl AffineG2 {
    pub fn zero() -> Self {
        AffineG2 { m: Mat::zero(8, 8) }
    }

    pub fn from_matrix(m: Mat) -> Result<Self> {
        if m.rows() != 8 || m.cols() != 8 {
            return Err(Error::ClosureViolation("matrix must be 8x8".into()));
        }
        for c in 0..8 {
            if !m[(7, c)].is_zero() {
                return Err(Error::ClosureViolation("last row must vanish".into()));
            }
        }
        let upper = Mat::from_fn(7, 7, |r, c| m[(r, c)].clone());
        if !g2_lie_relations(&upper) {
            return Err(Error::ClosureViolation(
                "rotation block violates the derivation relations".into(),
            ));
        }
        Ok(AffineG2 { m })
    }

    /// Assemble from blocks; the nu-block is derived, not supplied.
    pub fn from_blocks(c: &Mat, b: &Mat, x: &[Gq], y: &[Gq]) -> Result<Self> {
        assert!(c.rows() == 4 && c.cols() == 4);
        assert!(b.rows() == 3 && b.cols() == 4);
        assert!(x.len() == 4 && y.len() == 3);
        let nu_c = nu(c);
        let mut m = Mat::zero(8, 8);
        for r in 0..4 {
            for col in 0..4 {
                m[(r, col)] = c[(r, col)].clone();
            }
        }
        for r in 0..3 {
            for col in 0..4 {
                m[(4 + r, col)] = b[(r, col)].clone();
                m[(col, 4 + r)] = -&b[(r, col)];
            }
        }
        for r in 0..3 {
            for col in 0..3 {
                m[(4 + r, 4 + col)] = nu_c[(r, col)].clone();
            }
        }
        for (r, v) in x.iter().enumerate() {
            m[(r, 7)] = v.clone();
        }
        for (r, v) in y.iter().enumerate() {
            m[(4 + r, 7)] = v.clone();
        }
        AffineG2::from_matrix(m)
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn rotation_block(&self) -> Mat {
        Mat::from_fn(4, 4, |r, c| self.m[(r, c)].clone())
    }

    pub fn odd_block(&self) -> Mat {
        Mat::from_fn(3, 4, |r, c| self.m[(4 + r, c)].clone())
    }

    pub fn translation(&self) -> VecC {
        (0..7).map(|r| self.m[(r, 7)].clone()).collect()
    }

    /// Membership in the odd part: rotation and derived blocks vanish, as
    /// does the short translation component.
    pub fn is_in_odd_part(&self) -> bool {
        for r in 0..4 {
            for c in 0..4 {
                if !self.m[(r, c)].is_zero() {
                    return false;
                }
            }
        }
        for r in 4..7 {
            for c in 4..7 {
                if !self.m[(r, c)].is_zero() {
                    return false;
                }
            }
            if !self.m[(r, 7)].is_zero() {
                return false;
            }
        }
        true
    }

    pub fn add(&self, o: &AffineG2) -> AffineG2 {
        AffineG2 {
            m: &self.m + &o.m,
        }
    }

    pub fn scale(&self, s: &Gq) -> AffineG2 {
        AffineG2 {
            m: self.m.scale(s),
        }
    }
}

/// Matrix commutator; closure is asserted, so invalid inputs surface loudly.
pub fn affine_bracket(a: &AffineG2, b: &AffineG2) -> Result<AffineG2> {
    let m = a.m.commutator(&b.m);
    AffineG2::from_matrix(m)
}

/// The two commuting involutions: coefficientwise conjugation and
/// conjugation by diag(-I4, I3, 1).
pub fn hat_involutions(x: &AffineG2) -> (AffineG2, AffineG2) {
    let tau = AffineG2 { m: x.m.conj() };
    let s = involution_matrix();
    let sigma = AffineG2 {
        m: &(&s * &x.m) * &s,
    };
    (tau, sigma)
}

pub fn involution_matrix() -> Mat {
    Mat::from_fn(8, 8, |r, c| {
        if r != c {
            Gq::zero()
        } else if r < 4 {
            -Gq::one()
        } else {
            Gq::one()
        }
    })
}

/// The torus data of the associated system: the two 3x4 seeds and their
/// embeddings into the odd part, which commute.
#[derive(Clone, Debug)]
pub struct TorusData {
    pub a1: Mat,
    pub a2: Mat,
    pub b1: AffineG2,
    pub b2: AffineG2,
}

impl TorusData {
    pub fn standard() -> TorusData {
        let a1 = Mat::from_int_rows(&[&[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0]]);
        let a2 = Mat::from_int_rows(&[&[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let zero4 = vec![Gq::zero(); 4];
        let zero3 = vec![Gq::zero(); 3];
        let b1 = AffineG2::from_blocks(&Mat::zero(4, 4), &a1, &zero4, &zero3)
            .expect("first torus seed satisfies the relations");
        let b2 = AffineG2::from_blocks(&Mat::zero(4, 4), &a2, &zero4, &zero3)
            .expect("second torus seed satisfies the relations");
        let torus = TorusData { a1, a2, b1, b2 };
        debug_assert!(affine_bracket(&torus.b1, &torus.b2)
            .map(|x| x.is_zero())
            .unwrap_or(false));
        torus
    }
}

/// Constant coefficient data for the abelian system.
#[derive(Clone, Debug, Default)]
pub struct AbelianData {
    pub p1: Gq,
    pub p2: Gq,
    pub p3: Gq,
    pub q1: Gq,
    pub q2: Gq,
    pub q3: Gq,
    pub r1: Gq,
    pub r2: Gq,
    pub r3: Gq,
}

/// The odd-part element encoding the nine coefficient functions.
pub fn v_from_pqr(d: &AbelianData) -> AffineG2 {
    let z = Gq::zero;
    let b = Mat::from_rows(vec![
        vec![
            z(),
            d.p1.clone(),
            &d.q1 - &d.p2,
            -&(&d.p3 + &d.q2),
        ],
        vec![
            -&d.q2,
            -&d.p2,
            -&(&d.p1 + &d.q3),
            z(),
        ],
        vec![-&d.q1, -&d.p3, z(), d.q3.clone()],
    ]);
    let x = vec![d.r1.clone(), z(), d.r3.clone(), d.r2.clone()];
    let y = vec![z(), z(), z()];
    let v = AffineG2::from_blocks(&Mat::zero(4, 4), &b, &x, &y)
        .expect("coefficient matrix satisfies the odd-part relations");
    debug_assert!(v.is_in_odd_part());
    v
}

/// The connection coefficients A_i = lambda b_i + [b_i, v] for constant v.
pub fn theta_coefficients(v: &AffineG2, lambda: &Gq) -> Result<[AffineG2; 2]> {
    if !v.is_in_odd_part() {
        return Err(Error::NotInPhat);
    }
    let torus = TorusData::standard();
    let mut out = Vec::with_capacity(2);
    for b in [&torus.b1, &torus.b2] {
        let comm = affine_bracket(b, v)?;
        out.push(b.scale(lambda).add(&comm));
    }
    Ok([out[0].clone(), out[1].clone()])
}

/// Curvature of the family at one parameter value: the single commutator of
/// the two constant coefficients.
pub fn theta_curvature(v: &AffineG2, lambda: &Gq) -> Result<AffineG2> {
    let [a1, a2] = theta_coefficients(v, lambda)?;
    affine_bracket(&a1, &a2)
}

/// The parameter-power coefficients of the curvature: the square term is
/// the torus bracket, the linear term mixes, the constant term is the
/// bracket of the two mixed commutators.
pub fn flatness_coefficients(v: &AffineG2) -> Result<[AffineG2; 3]> {
    if !v.is_in_odd_part() {
        return Err(Error::NotInPhat);
    }
    let torus = TorusData::standard();
    let c1 = affine_bracket(&torus.b1, v)?;
    let c2 = affine_bracket(&torus.b2, v)?;
    let quad = affine_bracket(&torus.b1, &torus.b2)?;
    let lin = affine_bracket(&torus.b1, &c2)?.add(&affine_bracket(&c1, &torus.b2)?);
    let constant = affine_bracket(&c1, &c2)?;
    Ok([quad, lin, constant])
}

pub fn is_flat(v: &AffineG2) -> Result<bool> {
    Ok(flatness_coefficients(v)?.iter().all(|c| c.is_zero()))
}

/// A basis of the real form: rotation part, odd part, translations.
/// Used by the involution eigenspace checks.
pub fn real_form_basis() -> Vec<AffineG2> {
    let mut out = Vec::new();
    let zero4 = vec![Gq::zero(); 4];
    let zero3 = vec![Gq::zero(); 3];
    // rotation block: elementary antisymmetric matrices
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut c = Mat::zero(4, 4);
            c[(i, j)] = Gq::one();
            c[(j, i)] = -Gq::one();
            out.push(
                AffineG2::from_blocks(&c, &Mat::zero(3, 4), &zero4, &zero3)
                    .expect("rotation basis element"),
            );
        }
    }
    // odd block: kernel of the four linear relations on the 3x4 entries
    let relations: [Vec<(i64, usize, usize)>; 4] = [
        vec![(1, 0, 0), (1, 1, 3), (-1, 2, 2)],
        vec![(1, 0, 1), (1, 1, 2), (1, 2, 3)],
        vec![(1, 0, 2), (-1, 1, 1), (1, 2, 0)],
        vec![(1, 0, 3), (-1, 1, 0), (-1, 2, 1)],
    ];
    let system = Mat::from_fn(4, 12, |rel, idx| {
        let (r, c) = (idx / 4, idx % 4);
        let coeff: i64 = relations[rel]
            .iter()
            .filter(|&&(_, rr, cc)| (rr, cc) == (r, c))
            .map(|&(s, _, _)| s)
            .sum();
        Gq::from_int(coeff)
    });
    for k in system.kernel() {
        let b = Mat::from_fn(3, 4, |r, c| k[r * 4 + c].clone());
        out.push(
            AffineG2::from_blocks(&Mat::zero(4, 4), &b, &zero4, &zero3)
                .expect("odd basis element"),
        );
    }
    // translations
    for i in 0..4 {
        let mut x = zero4.clone();
        x[i] = Gq::one();
        out.push(
            AffineG2::from_blocks(&Mat::zero(4, 4), &Mat::zero(3, 4), &x, &zero3)
                .expect("long translation"),
        );
    }
    for i in 0..3 {
        let mut y = zero3.clone();
        y[i] = Gq::one();
        out.push(
            AffineG2::from_blocks(&Mat::zero(4, 4), &Mat::zero(3, 4), &zero4, &y)
                .expect("short translation"),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_element(rng: &mut rand_chacha::ChaCha8Rng) -> AffineG2 {
        let basis = real_form_basis();
        let mut acc = AffineG2::zero();
        for b in &basis {
            let c = Gq::from_int(rng.gen_range(-2..=2));
            acc = acc.add(&b.scale(&c));
        }
        acc
    }

    #[test]
    fn torus_brackets_vanish() {
        let t = TorusData::standard();
        let z = affine_bracket(&t.b1, &t.b2).unwrap();
        assert!(z.is_zero());
        let self_bracket = affine_bracket(&t.b1, &t.b1).unwrap();
        assert!(self_bracket.is_zero());
        // the sparse seed pattern: positions (1,1), (2,4), (3,3)
        assert!(t.a1[(0, 0)].is_one() && t.a1[(2, 2)].is_one());
        assert!(t.a2[(1, 3)].is_one() && t.a2[(2, 2)].is_one());
    }

    #[test]
    fn translations_are_abelian() {
        let zero4 = vec![Gq::zero(); 4];
        let zero3 = vec![Gq::zero(); 3];
        let mut x = zero4.clone();
        x[1] = Gq::from_int(2);
        let mut y = zero3.clone();
        y[0] = Gq::from_int(-1);
        let t1 = AffineG2::from_blocks(&Mat::zero(4, 4), &Mat::zero(3, 4), &x, &y).unwrap();
        let t2 = AffineG2::from_blocks(&Mat::zero(4, 4), &Mat::zero(3, 4), &zero4, &y).unwrap();
        assert!(affine_bracket(&t1, &t2).unwrap().is_zero());
    }

    #[test]
    fn involutions_commute_with_stated_eigenspaces() {
        let basis = real_form_basis();
        assert_eq!(basis.len(), 21);
        let mut odd = 0;
        let mut even = 0;
        for (idx, e) in basis.iter().enumerate() {
            let (tau, sigma) = hat_involutions(e);
            // real basis: conjugation fixes
            assert_eq!(tau, *e, "basis {idx} real");
            // involutions square to the identity and commute
            let (tau2, _) = hat_involutions(&tau);
            assert_eq!(tau2, *e);
            let (_, sigma2) = hat_involutions(&sigma);
            assert_eq!(sigma2, *e);
            let (tau_sigma, _) = hat_involutions(&sigma);
            let (_, sigma_tau) = hat_involutions(&tau);
            assert_eq!(tau_sigma, sigma_tau, "basis {idx} commute");
            // eigenvalues: rotation block and short translations fixed,
            // odd block and long translations negated
            if sigma == *e {
                even += 1;
            } else if sigma == e.scale(&(-Gq::one())) {
                odd += 1;
            } else {
                panic!("basis {idx} is not an eigenvector");
            }
        }
        assert_eq!(even, 9); // rotations (6) + short translations (3)
        assert_eq!(odd, 12); // odd block (8) + long translations (4)
    }

    #[test]
    fn torus_seeds_are_odd() {
        let t = TorusData::standard();
        let (_, sigma) = hat_involutions(&t.b1);
        assert_eq!(sigma, t.b1.scale(&(-Gq::one())));
        assert!(t.b1.is_in_odd_part());
        assert!(t.b2.is_in_odd_part());
    }

    #[test]
    fn pqr_patterns() {
        // all zero data gives zero
        assert!(v_from_pqr(&AbelianData::default()).is_zero());
        // a single long-translation coefficient
        let mut d = AbelianData::default();
        d.r1 = Gq::one();
        let v = v_from_pqr(&d);
        assert!(v.odd_block().is_zero());
        assert_eq!(
            v.translation(),
            vec![
                Gq::one(),
                Gq::zero(),
                Gq::zero(),
                Gq::zero(),
                Gq::zero(),
                Gq::zero(),
                Gq::zero()
            ]
        );
        // the first rotation coefficient appears at (1,2) of the odd block
        // and forces the compensating (2,3) entry
        let mut d = AbelianData::default();
        d.p1 = Gq::one();
        let v = v_from_pqr(&d);
        let b = v.odd_block();
        assert!(b[(0, 1)].is_one());
        assert_eq!(b[(1, 2)], -Gq::one());
        assert!(v.is_in_odd_part());
    }

    #[test]
    fn curvature_of_zero_data_is_flat() {
        let v = AffineG2::zero();
        for lambda in [0i64, 1, -1, 2, 5] {
            let c = theta_curvature(&v, &Gq::from_int(lambda)).unwrap();
            assert!(c.is_zero(), "lambda = {lambda}");
        }
        assert!(is_flat(&v).unwrap());
    }

    #[test]
    fn curvature_structure() {
        let mut d = AbelianData::default();
        d.r1 = Gq::one();
        d.r2 = Gq::from_int(2);
        let v = v_from_pqr(&d);
        // at lambda = 0 the curvature is the bracket of the two mixed terms
        let t = TorusData::standard();
        let c1 = affine_bracket(&t.b1, &v).unwrap();
        let c2 = affine_bracket(&t.b2, &v).unwrap();
        let expected = affine_bracket(&c1, &c2).unwrap();
        assert_eq!(theta_curvature(&v, &Gq::zero()).unwrap(), expected);
        // the square coefficient vanishes identically, so flatness is the
        // vanishing of the lower two
        let [quad, lin, constant] = flatness_coefficients(&v).unwrap();
        assert!(quad.is_zero());
        let flat = is_flat(&v).unwrap();
        assert_eq!(flat, lin.is_zero() && constant.is_zero());
        // translations bracket to zero against the torus in the odd slot:
        // pure-translation data is flat
        assert!(flat);
    }

    #[test]
    fn brackets_preserve_relations() {
        let mut rng = crate::sampling::rng_from_seed(61);
        for _ in 0..20 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let c = affine_bracket(&a, &b).expect("bracket closes");
            // from_matrix validated the relations on construction
            let _ = c;
        }
    }

    #[test]
    fn odd_data_rejected_elsewhere() {
        let t = TorusData::standard();
        // a rotation element is not in the odd part
        let basis = real_form_basis();
        assert!(theta_curvature(&basis[0], &Gq::one()).is_err());
        let _ = t;
    }
}
