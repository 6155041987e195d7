//! Closed-form simple factors for the four groups, their exact inverses,
//! and the twisted q-element products built from them.
//!
//! Every factor is a sum of hermitian projections weighted by integer powers
//! of the chart function mu = (lambda - alpha)/(lambda - conj alpha); nothing
//! is ever exponentiated.

use crate::error::{Error, Result};
use crate::exact::ratfun::{MoebiusChart, Rf};
use crate::exact::scalar::Gq;
use crate::linalg::forms::hermitian_projection;
use crate::linalg::matrix::{vec_scale, vec_sub, Mat};
use crate::linalg::subspace::Subspace;
use crate::linalg::{isotropic_classify, Form};
use crate::loops::{membership, symmetry_check, GroupContext, GroupKind, MLoop, TwistContext, TwistFlavor};
use crate::octonion::is_coassociative;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SimpleFactorSpec {
    /// mu pi_W + pi_{W-perp} on any subspace; the unitary-family factor.
    Gl { alpha: Gq, w: Subspace },
    /// mu^-1 pi_{conj L} + pi_{(L + conj L)-perp} + mu pi_L on an isotropic line.
    So { alpha: Gq, line: Subspace },
    /// mu pi_W + pi_{W-perp} on a Lagrangian subspace.
    Csp { alpha: Gq, w: Subspace },
    /// mu^-1 pi_{conj C} + pi_A + mu pi_C on a complex coassociative plane.
    G2Plane { alpha: Gq, plane: Subspace },
    /// Product of the two orthogonal-family line factors at the same pole;
    /// the pair must satisfy the simple-pole-pair conditions.
    G2Pair {
        alpha: Gq,
        l: Subspace,
        k: Subspace,
    },
}

impl SimpleFactorSpec {
    pub fn alpha(&self) -> &Gq {
        match self {
            SimpleFactorSpec::Gl { alpha, .. }
            | SimpleFactorSpec::So { alpha, .. }
            | SimpleFactorSpec::Csp { alpha, .. }
            | SimpleFactorSpec::G2Plane { alpha, .. }
            | SimpleFactorSpec::G2Pair { alpha, .. } => alpha,
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            SimpleFactorSpec::Gl { w, .. } => w.ambient(),
            SimpleFactorSpec::So { line, .. } => line.ambient(),
            SimpleFactorSpec::Csp { w, .. } => w.ambient(),
            SimpleFactorSpec::G2Plane { .. } | SimpleFactorSpec::G2Pair { .. } => 7,
        }
    }

    pub fn group_kind(&self) -> GroupKind {
        match self {
            SimpleFactorSpec::Gl { w, .. } => GroupKind::UnitaryGl(w.ambient()),
            SimpleFactorSpec::So { line, .. } => GroupKind::OrthogonalSo(line.ambient()),
            SimpleFactorSpec::Csp { w, .. } => GroupKind::ConformalSymplectic(w.ambient() / 2),
            SimpleFactorSpec::G2Plane { .. } | SimpleFactorSpec::G2Pair { .. } => GroupKind::G2Fund,
        }
    }

    pub fn group_context(&self) -> GroupContext {
        GroupContext::new(self.group_kind())
    }

    /// Check every subspace condition exactly.
    pub fn validate(&self) -> Result<()> {
        if self.alpha().is_real() {
            return Err(Error::SpecInvalid("pole parameter must be non-real".into()));
        }
        match self {
            SimpleFactorSpec::Gl { .. } => Ok(()),
            SimpleFactorSpec::So { line, .. } => {
                if line.dim() != 1 {
                    return Err(Error::SpecInvalid("orthogonal factor needs a line".into()));
                }
                let rep = isotropic_classify(line, &Form::bilinear(line.ambient()))?;
                if !rep.isotropic {
                    return Err(Error::SpecInvalid("line is not isotropic".into()));
                }
                Ok(())
            }
            SimpleFactorSpec::Csp { w, .. } => {
                if w.ambient() % 2 != 0 {
                    return Err(Error::SpecInvalid("symplectic ambient must be even".into()));
                }
                let rep = isotropic_classify(w, &Form::symplectic(w.ambient()))?;
                if !rep.lagrangian {
                    return Err(Error::SpecInvalid("subspace is not Lagrangian".into()));
                }
                Ok(())
            }
            SimpleFactorSpec::G2Plane { plane, .. } => {
                if !is_coassociative(plane) {
                    return Err(Error::SpecInvalid(
                        "plane is not complex coassociative".into(),
                    ));
                }
                Ok(())
            }
            SimpleFactorSpec::G2Pair { l, k, .. } => {
                for (name, line) in [("first", l), ("second", k)] {
                    if line.dim() != 1 || line.ambient() != 7 {
                        return Err(Error::SpecInvalid(format!("{name} member must be a line in C^7")));
                    }
                    if !isotropic_classify(line, &Form::bilinear(7))?.isotropic {
                        return Err(Error::SpecInvalid(format!("{name} line is not isotropic")));
                    }
                }
                // K must be hermitian-orthogonal to L (equivalently the
                // bilinear pairing of conj L with K vanishes).
                let lv = l.basis().column(0);
                let kv = k.basis().column(0);
                let herm = Form::hermitian(7);
                if !herm.apply(&lv, &kv).is_zero() {
                    return Err(Error::SpecInvalid(
                        "pair condition fails: K is not hermitian-orthogonal to L".into(),
                    ));
                }
                let plane = pair_plane(l, k)?;
                if !is_coassociative(&plane) {
                    return Err(Error::SpecInvalid(
                        "pair condition fails: projected plane is not coassociative".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// The exact rational loop of the factor.
    pub fn materialize(&self) -> Result<MLoop> {
        self.validate()?;
        let chart = MoebiusChart::new(self.alpha().clone())?;
        let mu = Rf::mu(&chart);
        let mu_inv = Rf::mu_inv(&chart);
        match self {
            SimpleFactorSpec::Gl { w, .. } | SimpleFactorSpec::Csp { w, .. } => {
                let n = w.ambient();
                let p = hermitian_projection(w)?;
                let p_perp = &Mat::identity(n) - &p;
                Ok(MLoop::projection_sum(n, &[(mu, p), (Rf::one(), p_perp)]))
            }
            SimpleFactorSpec::So { line, .. } => {
                let n = line.ambient();
                let p_l = hermitian_projection(line)?;
                let p_lbar = hermitian_projection(&line.conj())?;
                let p_mid = &(&Mat::identity(n) - &p_l) - &p_lbar;
                Ok(MLoop::projection_sum(
                    n,
                    &[(mu_inv, p_lbar), (Rf::one(), p_mid), (mu, p_l)],
                ))
            }
            SimpleFactorSpec::G2Plane { plane, .. } => {
                let p_c = hermitian_projection(plane)?;
                let p_cbar = hermitian_projection(&plane.conj())?;
                let p_a = &(&Mat::identity(7) - &p_c) - &p_cbar;
                Ok(MLoop::projection_sum(
                    7,
                    &[(mu_inv, p_cbar), (Rf::one(), p_a), (mu, p_c)],
                ))
            }
            SimpleFactorSpec::G2Pair { alpha, l, k } => {
                let left = SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line: l.clone(),
                };
                let right = SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line: k.clone(),
                };
                Ok(left.materialize()?.mul(&right.materialize()?))
            }
        }
    }

    /// The spec whose materialization is the exact inverse: swap alpha with
    /// its conjugate (and reverse a pair).
    pub fn inverse_spec(&self) -> SimpleFactorSpec {
        match self {
            SimpleFactorSpec::Gl { alpha, w } => SimpleFactorSpec::Gl {
                alpha: alpha.conj(),
                w: w.clone(),
            },
            SimpleFactorSpec::So { alpha, line } => SimpleFactorSpec::So {
                alpha: alpha.conj(),
                line: line.clone(),
            },
            SimpleFactorSpec::Csp { alpha, w } => SimpleFactorSpec::Csp {
                alpha: alpha.conj(),
                w: w.clone(),
            },
            SimpleFactorSpec::G2Plane { alpha, plane } => SimpleFactorSpec::G2Plane {
                alpha: alpha.conj(),
                plane: plane.clone(),
            },
            SimpleFactorSpec::G2Pair { alpha, l, k } => SimpleFactorSpec::G2Pair {
                alpha: alpha.conj(),
                l: k.clone(),
                k: l.clone(),
            },
        }
    }

    /// Cheaper than inverting the materialized loop.
    pub fn inverse_closed_form(&self) -> Result<MLoop> {
        self.inverse_spec().materialize()
    }
}

/// The coassociative plane attached to a pair of lines:
/// L + (projection of K away from L and conj L).
pub fn pair_plane(l: &Subspace, k: &Subspace) -> Result<Subspace> {
    let h = l.sum(&l.conj());
    let proj = hermitian_projection(&h.hermitian_complement())?;
    let kv = k.basis().column(0);
    let projected = proj.apply(&kv);
    let plane = l.sum(&Subspace::line(&projected));
    Ok(plane)
}

/// Split a coassociative plane into two hermitian-orthogonal lines, so the
/// plane factor equals the product of the two line factors.
pub fn plane_hermitian_split(plane: &Subspace) -> (Subspace, Subspace) {
    let b = plane.basis_vectors();
    let herm = Form::hermitian(plane.ambient());
    let g01 = herm.apply(&b[0], &b[1]);
    let g00 = herm.apply(&b[0], &b[0]);
    let coeff = &g01 * &g00.inv().expect("basis vector nonzero");
    let k_vec = vec_sub(&b[1], &vec_scale(&b[0], &coeff));
    (Subspace::line(&b[0]), Subspace::line(&k_vec))
}

/// A twisted generator: the product of a simple factor with a companion
/// factor at the reflected pole, twisted for the given flavor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedQSpec {
    pub base: SimpleFactorSpec,
    pub twist: TwistContext,
}

fn flavor_matches(kind: GroupKind, flavor: TwistFlavor) -> bool {
    matches!(
        (kind, flavor),
        (GroupKind::OrthogonalSo(_), TwistFlavor::SoGrassmannian { .. })
            | (GroupKind::OrthogonalSo(_), TwistFlavor::SoUnitary)
            | (GroupKind::G2Fund, TwistFlavor::G2So4)
            | (GroupKind::ConformalSymplectic(_), TwistFlavor::CspUnitary)
    )
}

/// Build the twisted q-element for a base factor with pole off both axes.
/// Returns the loop and the constituent factor specs (companion first, so
/// the product of their materializations is the loop).
pub fn make_twisted_q(spec: &TwistedQSpec) -> Result<(MLoop, Vec<SimpleFactorSpec>)> {
    let alpha = spec.base.alpha().clone();
    if alpha.is_real() || alpha.is_imaginary() {
        return Err(Error::AlphaOnAxis);
    }
    spec.base.validate()?;
    if !flavor_matches(spec.base.group_kind(), spec.twist.flavor) {
        return Err(Error::SpecInvalid(
            "twist flavor does not match the factor's group".into(),
        ));
    }
    let n = spec.base.ambient();
    let s = spec.twist.s_matrix(n);
    let (companion, constituents): (Vec<SimpleFactorSpec>, Vec<SimpleFactorSpec>) = match &spec.base {
        SimpleFactorSpec::So { line, .. } => {
            let base_loop = spec.base.materialize()?;
            let moved = line
                .image_under(&s)
                .image_under(&base_loop.value_at(&(-&alpha))?);
            let comp = SimpleFactorSpec::So {
                alpha: -&alpha,
                line: moved,
            };
            (vec![comp.clone()], vec![comp, spec.base.clone()])
        }
        SimpleFactorSpec::Csp { w, .. } => {
            // Under the multiplier-corrected involution the companion lives
            // at the negated-conjugate pole and moves the conjugate subspace.
            let base_loop = spec.base.materialize()?;
            let eval_at = -&alpha.conj();
            let moved = w
                .conj()
                .image_under(&base_loop.value_at(&eval_at)?);
            let comp = SimpleFactorSpec::Csp {
                alpha: eval_at,
                w: moved,
            };
            (vec![comp.clone()], vec![comp, spec.base.clone()])
        }
        SimpleFactorSpec::G2Plane { alpha, plane } => {
            let (l, k) = plane_hermitian_split(plane);
            let pair = TwistedQSpec {
                base: SimpleFactorSpec::G2Pair {
                    alpha: alpha.clone(),
                    l,
                    k,
                },
                twist: spec.twist,
            };
            return make_twisted_q(&pair);
        }
        SimpleFactorSpec::G2Pair { alpha, l, k } => {
            let base_loop = spec.base.materialize()?;
            let minus_alpha = -alpha;
            let value = base_loop.value_at(&minus_alpha)?;
            let sk = k.image_under(&s);
            let sk_moved = sk.image_under(&value);
            // Dress the base by the companion line factor to locate the
            // moved first line: u = p(sK') * base * p(sK)^-1 is holomorphic
            // at the reflected pole and carries sL there.
            let p_sk_moved = SimpleFactorSpec::So {
                alpha: minus_alpha.clone(),
                line: sk_moved.clone(),
            };
            let p_sk = SimpleFactorSpec::So {
                alpha: minus_alpha.clone(),
                line: sk,
            };
            let u = p_sk_moved
                .materialize()?
                .mul(&base_loop)
                .mul(&p_sk.inverse_closed_form()?);
            let u_value = u.value_at(&minus_alpha)?;
            let sl_moved = l.image_under(&s).image_under(&u_value);
            let comp = SimpleFactorSpec::G2Pair {
                alpha: minus_alpha,
                l: sl_moved,
                k: sk_moved,
            };
            comp.validate()?;
            (vec![comp.clone()], vec![comp, spec.base.clone()])
        }
        SimpleFactorSpec::Gl { .. } => {
            return Err(Error::SpecInvalid(
                "no twisted flavor is defined for the unitary family".into(),
            ))
        }
    };
    let mut q = MLoop::identity(n);
    for part in &companion {
        q = q.mul(&part.materialize()?);
    }
    q = q.mul(&spec.base.materialize()?);
    let ctx = spec.base.group_context();
    let report = symmetry_check(&q, &ctx, Some(&spec.twist));
    if report.twisted != Some(true) || !report.real {
        return Err(Error::NotTwisted);
    }
    Ok((q, constituents))
}

/// Membership plus reality plus normalization in one call; used to validate
/// factorization inputs eagerly.
pub fn validate_loop(g: &MLoop, ctx: &GroupContext) -> Result<()> {
    let rep = membership(g, ctx);
    if !rep.member {
        return Err(Error::NotAMember(rep.detail));
    }
    let sym = symmetry_check(g, ctx, None);
    if !sym.real {
        return Err(Error::NotAMember("reality condition fails".into()));
    }
    if !sym.normalized {
        return Err(Error::NotAMember(
            "loop is not normalized to the identity at infinity".into(),
        ));
    }
    Ok(())
}
