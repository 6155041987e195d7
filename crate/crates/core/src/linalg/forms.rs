//! The three forms on Q(i)^n and the subspace constructions driven by them:
//! hermitian projections, isotropy classification, Lagrangian completion,
//! and fixed lines of antilinear involutions.

use crate::error::{Error, Result};
use crate::exact::scalar::Gq;
use crate::linalg::matrix::{basis_vec, vec_add, vec_conj, vec_is_zero, vec_scale, vec_sub, Mat, VecC};
use crate::linalg::subspace::Subspace;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormKind {
    Hermitian,
    Bilinear,
    Symplectic,
}

/// A form on Q(i)^n. Hermitian is conjugate-linear in the first slot,
/// bilinear is the symmetric extension of the real inner product, and
/// symplectic is t(v) J w with J = (0 I; -I 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    pub kind: FormKind,
    pub n: usize,
}

impl Form {
    pub fn hermitian(n: usize) -> Form {
        Form {
            kind: FormKind::Hermitian,
            n,
        }
    }

    pub fn bilinear(n: usize) -> Form {
        Form {
            kind: FormKind::Bilinear,
            n,
        }
    }

    pub fn symplectic(n: usize) -> Form {
        assert!(n % 2 == 0, "symplectic form needs even dimension");
        Form {
            kind: FormKind::Symplectic,
            n,
        }
    }

    pub fn apply(&self, v: &[Gq], w: &[Gq]) -> Gq {
        assert_eq!(v.len(), self.n);
        assert_eq!(w.len(), self.n);
        match self.kind {
            FormKind::Hermitian => {
                let mut acc = Gq::zero();
                for (a, b) in v.iter().zip(w) {
                    acc = &acc + &(&a.conj() * b);
                }
                acc
            }
            FormKind::Bilinear => {
                let mut acc = Gq::zero();
                for (a, b) in v.iter().zip(w) {
                    acc = &acc + &(a * b);
                }
                acc
            }
            FormKind::Symplectic => {
                let half = self.n / 2;
                let mut acc = Gq::zero();
                for i in 0..half {
                    acc = &acc + &(&v[i] * &w[half + i]);
                    acc = &acc - &(&v[half + i] * &w[i]);
                }
                acc
            }
        }
    }
}

/// The block matrix (0 I; -I 0) on Q(i)^(2n).
pub fn symplectic_j(dim: usize) -> Mat {
    assert!(dim % 2 == 0);
    let half = dim / 2;
    Mat::from_fn(dim, dim, |r, c| {
        if r < half && c == half + r {
            Gq::one()
        } else if r >= half && c == r - half {
            -Gq::one()
        } else {
            Gq::zero()
        }
    })
}

/// Hermitian projection onto a subspace: B (B* B)^-1 B*. The projection is
/// basis-invariant, so the echelon columns are first rescaled to primitive
/// Gaussian-integer vectors to keep the Gram arithmetic small.
pub fn hermitian_projection(w: &Subspace) -> Result<Mat> {
    let n = w.ambient();
    if w.dim() == 0 {
        return Ok(Mat::zero(n, n));
    }
    let cols: Vec<VecC> = w
        .basis_vectors()
        .iter()
        .map(|v| crate::exact::roots::primitive_scale(v))
        .collect();
    let b = Mat::from_columns(n, &cols);
    let gram = &b.adjoint() * &b;
    let gram_inv = gram.inverse().map_err(|_| Error::SingularGram)?;
    Ok(&(&b * &gram_inv) * &b.adjoint())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IsotropyReport {
    pub isotropic: bool,
    pub lagrangian: bool,
    pub real: bool,
}

/// Classify a subspace against a bilinear or symplectic form: isotropy on
/// all basis pairs, Lagrangian (symplectic, dim = n/2), and invariance
/// under coefficientwise conjugation.
pub fn isotropic_classify(w: &Subspace, form: &Form) -> Result<IsotropyReport> {
    if w.ambient() != form.n {
        return Err(Error::DimensionMismatch(format!(
            "subspace in C^{} against form on C^{}",
            w.ambient(),
            form.n
        )));
    }
    if form.kind == FormKind::Hermitian {
        return Err(Error::DimensionMismatch(
            "isotropy is classified for bilinear or symplectic forms".into(),
        ));
    }
    let basis = w.basis_vectors();
    let mut isotropic = true;
    'outer: for (i, v) in basis.iter().enumerate() {
        for u in basis.iter().skip(i) {
            if !form.apply(v, u).is_zero() {
                isotropic = false;
                break 'outer;
            }
        }
    }
    let lagrangian =
        form.kind == FormKind::Symplectic && isotropic && w.dim() == form.n / 2;
    Ok(IsotropyReport {
        isotropic,
        lagrangian,
        real: w.is_real(),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LagrangianFlavor {
    Any,
    Real,
}

/// Vectors symplectically orthogonal to everything in `u`.
fn symplectic_perp(u: &Subspace) -> Subspace {
    let dim = u.ambient();
    if u.dim() == 0 {
        return Subspace::full(dim);
    }
    let j = symplectic_j(dim);
    let m = &u.basis().transpose() * &j;
    Subspace::from_vectors(dim, &m.kernel())
}

/// Extend an isotropic subspace to a Lagrangian one, greedily over the
/// standard basis in index order with a canonical echelon fallback. For the
/// real flavor the result is conjugation-invariant and contains V + conj V.
pub fn extend_to_lagrangian(v: &Subspace, flavor: LagrangianFlavor) -> Result<Subspace> {
    let dim = v.ambient();
    if dim % 2 != 0 {
        return Err(Error::DimensionMismatch(
            "Lagrangian completion needs even ambient dimension".into(),
        ));
    }
    let half = dim / 2;
    let form = Form::symplectic(dim);
    if !isotropic_classify(v, &form)?.isotropic {
        return Err(Error::NotIsotropic);
    }
    let mut u = match flavor {
        LagrangianFlavor::Any => v.clone(),
        LagrangianFlavor::Real => {
            let sum = v.sum(&v.conj());
            if !isotropic_classify(&sum, &form)?.isotropic {
                return Err(Error::RealExtensionImpossible);
            }
            sum
        }
    };
    while u.dim() < half {
        let perp = symplectic_perp(&u);
        let mut added = false;
        // Standard basis vectors are real, so they serve both flavors.
        for i in 0..dim {
            let e = basis_vec(dim, i);
            if perp.contains_vec(&e) && !u.contains_vec(&e) {
                u = u.sum(&Subspace::line(&e));
                added = true;
                break;
            }
        }
        if !added {
            for cand in perp.basis_vectors() {
                let picks: Vec<VecC> = match flavor {
                    LagrangianFlavor::Any => vec![cand.clone()],
                    LagrangianFlavor::Real => {
                        let c1 = vec_add(&cand, &vec_conj(&cand));
                        let c2 = vec_scale(&vec_sub(&cand, &vec_conj(&cand)), &Gq::i());
                        vec![c1, c2]
                    }
                };
                for p in picks {
                    if !vec_is_zero(&p) && !u.contains_vec(&p) {
                        u = u.sum(&Subspace::line(&p));
                        added = true;
                        break;
                    }
                }
                if added {
                    break;
                }
            }
        }
        if !added {
            return Err(match flavor {
                LagrangianFlavor::Any => Error::NotIsotropic,
                LagrangianFlavor::Real => Error::RealExtensionImpossible,
            });
        }
    }
    debug_assert!(isotropic_classify(&u, &form)?.lagrangian);
    Ok(u)
}

/// Image of a subspace under v -> s * conj(v).
pub fn antilinear_image(s: &Mat, v: &Subspace) -> Subspace {
    v.conj().image_under(s)
}

/// A spanning vector of an invariant line that the antilinear map
/// v -> s conj(v) fixes pointwise, not merely up to phase. The canonical
/// echelon basis vector is only projectively fixed; averaging restores a
/// genuinely fixed representative.
pub fn antilinear_fixed_vector(line: &Subspace, s: &Mat) -> Result<VecC> {
    if line.dim() != 1 {
        return Err(Error::NoFixedLine);
    }
    let v = line.basis().column(0);
    let phi = s.apply(&vec_conj(&v));
    if !line.contains_vec(&phi) {
        return Err(Error::NoFixedLine);
    }
    let c1 = vec_add(&v, &phi);
    let fixed = if !vec_is_zero(&c1) {
        c1
    } else {
        vec_scale(&vec_sub(&v, &phi), &Gq::i())
    };
    debug_assert_eq!(s.apply(&vec_conj(&fixed)), fixed);
    Ok(fixed)
}

/// A line L inside V fixed by the antilinear map v -> s conj(v), which must
/// be an involution preserving V. Found by averaging the first basis vector.
pub fn antilinear_fixed_line(v: &Subspace, s: &Mat) -> Result<Subspace> {
    if v.dim() == 0 {
        return Err(Error::NoFixedLine);
    }
    if antilinear_image(s, v) != *v {
        return Err(Error::NoFixedLine);
    }
    let phi = |x: &VecC| s.apply(&vec_conj(x));
    for b in v.basis_vectors() {
        if phi(&phi(&b)) != b {
            return Err(Error::NoFixedLine);
        }
    }
    let b = v.basis().column(0);
    let c1 = vec_add(&b, &phi(&b));
    let candidate = if !vec_is_zero(&c1) {
        c1
    } else {
        vec_scale(&vec_sub(&b, &phi(&b)), &Gq::i())
    };
    debug_assert!(!vec_is_zero(&candidate));
    debug_assert_eq!(phi(&candidate), candidate);
    let line = Subspace::line(&candidate);
    debug_assert!(v.contains(&line));
    Ok(line)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> VecC {
        basis_vec(n, i)
    }

    #[test]
    fn projection_examples() {
        // span(e1) in C^2 -> diag(1, 0)
        let s = Subspace::line(&e(2, 0));
        let p = hermitian_projection(&s).unwrap();
        assert_eq!(p, Mat::from_int_rows(&[&[1, 0], &[0, 0]]));
        // the whole space -> identity
        let p = hermitian_projection(&Subspace::full(2)).unwrap();
        assert!(p.is_identity());
        // span(e1 + i e2) -> (1/2) [[1, -i], [i, 1]]; oracle B(B*B)^-1 B*.
        let mut v = e(2, 0);
        v[1] = Gq::i();
        let p = hermitian_projection(&Subspace::line(&v)).unwrap();
        let half = Gq::ratio(1, 2);
        let expected = Mat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) | (1, 1) => half.clone(),
            (0, 1) => &half * &(-Gq::i()),
            _ => &half * &Gq::i(),
        });
        assert_eq!(p, expected);
    }

    #[test]
    fn projection_laws() {
        let mut v1 = e(3, 0);
        v1[1] = Gq::from_ints(2, 1);
        let mut v2 = e(3, 2);
        v2[0] = Gq::from_ints(0, -1);
        let s = Subspace::from_vectors(3, &[v1, v2]);
        let p = hermitian_projection(&s).unwrap();
        assert_eq!(&p * &p, p);
        assert_eq!(p.adjoint(), p);
        assert_eq!(Subspace::column_space(&p), s);
    }

    #[test]
    fn isotropy_examples() {
        // span(e1 + i e2) in C^3 is bilinear-isotropic.
        let mut v = e(3, 0);
        v[1] = Gq::i();
        let rep = isotropic_classify(&Subspace::line(&v), &Form::bilinear(3)).unwrap();
        assert!(rep.isotropic);
        assert!(!rep.real);
        // span(e1..en) in C^2n is Lagrangian and real.
        let s = Subspace::from_vectors(4, &[e(4, 0), e(4, 1)]);
        let rep = isotropic_classify(&s, &Form::symplectic(4)).unwrap();
        assert!(rep.isotropic && rep.lagrangian && rep.real);
        // span(e1) is not bilinear-isotropic.
        let rep = isotropic_classify(&Subspace::line(&e(3, 0)), &Form::bilinear(3)).unwrap();
        assert!(!rep.isotropic);
    }

    #[test]
    fn lagrangian_extension() {
        // V = 0 in C^2: greedy picks e1.
        let w = extend_to_lagrangian(&Subspace::zero(2), LagrangianFlavor::Any).unwrap();
        assert_eq!(w, Subspace::line(&e(2, 0)));
        // Already Lagrangian: unchanged.
        let s = Subspace::from_vectors(4, &[e(4, 0), e(4, 1)]);
        assert_eq!(
            extend_to_lagrangian(&s, LagrangianFlavor::Any).unwrap(),
            s
        );
        // A seed orthogonal to no standard vector: brute-force omega table
        // says e_i never works, so the echelon fallback must fire.
        let n = 4;
        let form = Form::symplectic(n);
        let mut v = e(n, 0);
        v[1] = Gq::one();
        v[2] = Gq::one();
        v[3] = Gq::one();
        for i in 0..n {
            assert!(!form.apply(&e(n, i), &v).is_zero(), "oracle: e{i} not usable");
        }
        let w = extend_to_lagrangian(&Subspace::line(&v), LagrangianFlavor::Any).unwrap();
        let rep = isotropic_classify(&w, &form).unwrap();
        assert!(rep.lagrangian);
        assert!(w.contains(&Subspace::line(&v)));
        // Non-isotropic input rejected.
        let mut bad = e(n, 0);
        bad[2] = Gq::one(); // omega(e1, e3) = 1 in the (0 I; -I 0) convention
        assert_eq!(
            extend_to_lagrangian(
                &Subspace::from_vectors(n, &[e(n, 0), bad]),
                LagrangianFlavor::Any
            ),
            Err(Error::NotIsotropic)
        );
    }

    #[test]
    fn real_lagrangian_extension() {
        let n = 4;
        // V = span(e1 + i e2): V + conj V = span(e1, e2), isotropic.
        let mut v = e(n, 0);
        v[1] = Gq::i();
        let w = extend_to_lagrangian(&Subspace::line(&v), LagrangianFlavor::Real).unwrap();
        assert!(w.is_real());
        assert!(w.contains_vec(&v));
        assert!(w.contains_vec(&vec_conj(&v)));
        let rep = isotropic_classify(&w, &Form::symplectic(n)).unwrap();
        assert!(rep.lagrangian);
        // V = span(e1 + i e3): omega(v, conj v) != 0, no real extension.
        let mut v = e(n, 0);
        v[2] = Gq::i();
        assert_eq!(
            extend_to_lagrangian(&Subspace::line(&v), LagrangianFlavor::Real),
            Err(Error::RealExtensionImpossible)
        );
    }

    #[test]
    fn fixed_line_examples() {
        let id = Mat::identity(2);
        let l = antilinear_fixed_line(&Subspace::line(&e(2, 0)), &id).unwrap();
        assert_eq!(l, Subspace::line(&e(2, 0)));
        // s = Id, V = span(i e1): averaging strips the phase.
        let v = vec_scale(&e(2, 0), &Gq::i());
        let l = antilinear_fixed_line(&Subspace::line(&v), &id).unwrap();
        assert_eq!(l, Subspace::line(&e(2, 0)));
        // s = diag(1, -1) on all of C^2: verify s conj(L) = L by re-application.
        let s = Mat::from_int_rows(&[&[1, 0], &[0, -1]]);
        let l = antilinear_fixed_line(&Subspace::full(2), &s).unwrap();
        assert_eq!(antilinear_image(&s, &l), l);
    }
}
