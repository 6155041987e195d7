//! Dressing of loops by simple factors and the permutability identities.
//!
//! Dressing conjugates a loop that is holomorphic at the factor's pole by
//! the factor and a moved companion so the result stays holomorphic there.
//! For the exceptional family the companion is built in two stages: the
//! second line moves by the value of the loop, the first by the value of
//! the once-dressed loop.

use crate::error::{Error, Result};
use crate::exact::scalar::Gq;
use crate::linalg::matrix::Mat;
use crate::linalg::subspace::Subspace;
use crate::loops::{membership, MLoop};
use crate::simple::{plane_hermitian_split, SimpleFactorSpec};

#[derive(Clone, Debug)]
pub struct DressingOutcome {
    /// p h p'^-1, holomorphic at the dressing pole(s).
    pub conjugated: MLoop,
    /// The moved factor p'.
    pub right: SimpleFactorSpec,
}

fn check_holomorphic_at(h: &MLoop, x: &Gq) -> Result<()> {
    if h.entries().iter().any(|e| e.pole_order(x) > 0) {
        return Err(Error::HolomorphyPrecondition);
    }
    Ok(())
}

fn invertible_value(h: &MLoop, x: &Gq) -> Result<Mat> {
    check_holomorphic_at(h, x)?;
    let v = h.value_at(x)?;
    v.inverse().map_err(|_| Error::SingularAtAlpha)
}

/// The one-sided action p * h = p h p'^-1 with the companion's data moved
/// by h's value at the pole.
pub fn dress(p: &SimpleFactorSpec, h: &MLoop) -> Result<DressingOutcome> {
    p.validate()?;
    if h.n() != p.ambient() {
        return Err(Error::DimensionMismatch(
            "loop and factor ambient dimensions differ".into(),
        ));
    }
    let alpha = p.alpha().clone();
    let value_inv = invertible_value(h, &alpha)?;
    let (right, conjugated) = match p {
        SimpleFactorSpec::Gl { .. } | SimpleFactorSpec::Csp { .. } | SimpleFactorSpec::So { .. } => {
            let right = match p {
                SimpleFactorSpec::Gl { w, .. } => SimpleFactorSpec::Gl {
                    alpha: alpha.clone(),
                    w: w.image_under(&value_inv),
                },
                SimpleFactorSpec::Csp { w, .. } => SimpleFactorSpec::Csp {
                    alpha: alpha.clone(),
                    w: w.image_under(&value_inv),
                },
                SimpleFactorSpec::So { line, .. } => SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line: line.image_under(&value_inv),
                },
                _ => unreachable!(),
            };
            let conjugated = p
                .materialize()?
                .mul(h)
                .mul(&right.inverse_closed_form()?);
            (right, conjugated)
        }
        SimpleFactorSpec::G2Plane { plane, .. } => {
            let (l, k) = plane_hermitian_split(plane);
            return dress(
                &SimpleFactorSpec::G2Pair {
                    alpha,
                    l,
                    k,
                },
                h,
            );
        }
        SimpleFactorSpec::G2Pair { l, k, .. } => {
            // reality pairs holomorphy at the conjugate location
            check_holomorphic_at(h, &alpha.conj())?;
            let k_moved = k.image_under(&value_inv);
            let p_k = SimpleFactorSpec::So {
                alpha: alpha.clone(),
                line: k.clone(),
            };
            let p_k_moved = SimpleFactorSpec::So {
                alpha: alpha.clone(),
                line: k_moved.clone(),
            };
            let once = p_k
                .materialize()?
                .mul(h)
                .mul(&p_k_moved.inverse_closed_form()?);
            let once_value_inv = invertible_value(&once, &alpha)?;
            let l_moved = l.image_under(&once_value_inv);
            let right = SimpleFactorSpec::G2Pair {
                alpha: alpha.clone(),
                l: l_moved,
                k: k_moved,
            };
            right.validate()?;
            let conjugated = p
                .materialize()?
                .mul(h)
                .mul(&right.inverse_closed_form()?);
            (right, conjugated)
        }
    };
    // the defining property: no pole is left at the dressing location(s)
    check_holomorphic_at(&conjugated, &alpha).map_err(|_| Error::SingularAtAlpha)?;
    if matches!(p, SimpleFactorSpec::G2Pair { .. } | SimpleFactorSpec::G2Plane { .. }) {
        check_holomorphic_at(&conjugated, &alpha.conj()).map_err(|_| Error::SingularAtAlpha)?;
    }
    Ok(DressingOutcome { conjugated, right })
}

/// Simple-factor permutability: factors at distinct pole pairs exchange
/// sides after moving their data by each other's values. Returns
/// (p2hat, p1hat) with p2hat * p1 = p1hat * p2, asserted exactly.
pub fn permute(
    p1: &SimpleFactorSpec,
    p2: &SimpleFactorSpec,
) -> Result<(SimpleFactorSpec, SimpleFactorSpec)> {
    p1.validate()?;
    p2.validate()?;
    if p1.group_kind() != p2.group_kind() {
        return Err(Error::DimensionMismatch(
            "factors belong to different groups".into(),
        ));
    }
    let alpha = p1.alpha().clone();
    let beta = p2.alpha().clone();
    if alpha == beta || alpha == beta.conj() {
        return Err(Error::PoleClash);
    }
    let (p2hat, p1hat) = match (p1, p2) {
        (SimpleFactorSpec::Gl { w, .. }, SimpleFactorSpec::Gl { w: v, .. })
        | (SimpleFactorSpec::Csp { w, .. }, SimpleFactorSpec::Csp { w: v, .. }) => {
            let p1_at_beta = p1.materialize()?.value_at(&beta)?;
            let p2_at_alpha = p2.materialize()?.value_at(&alpha)?;
            let make = |a: &Gq, sub: Subspace| -> SimpleFactorSpec {
                match p1 {
                    SimpleFactorSpec::Gl { .. } => SimpleFactorSpec::Gl {
                        alpha: a.clone(),
                        w: sub,
                    },
                    _ => SimpleFactorSpec::Csp {
                        alpha: a.clone(),
                        w: sub,
                    },
                }
            };
            (
                make(&beta, v.image_under(&p1_at_beta)),
                make(&alpha, w.image_under(&p2_at_alpha)),
            )
        }
        (SimpleFactorSpec::So { line: l, .. }, SimpleFactorSpec::So { line: m, .. }) => {
            let p1_at_beta = p1.materialize()?.value_at(&beta)?;
            let p2_at_alpha = p2.materialize()?.value_at(&alpha)?;
            (
                SimpleFactorSpec::So {
                    alpha: beta.clone(),
                    line: m.image_under(&p1_at_beta),
                },
                SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line: l.image_under(&p2_at_alpha),
                },
            )
        }
        _ => {
            // exceptional family: normalize both to pairs and apply the
            // four moved-line formulas
            let (l, k) = as_pair(p1);
            let (m, n) = as_pair(p2);
            let p1_loop = p1.materialize()?;
            let p2_loop = p2.materialize()?;
            let k_moved = k.image_under(&p2_loop.value_at(&alpha)?);
            let l_moved = {
                let p_k_moved = SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line: k_moved.clone(),
                };
                let p_k = SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line: k.clone(),
                };
                let dressed = p_k_moved
                    .materialize()?
                    .mul(&p2_loop)
                    .mul(&p_k.inverse_closed_form()?);
                l.image_under(&dressed.value_at(&alpha)?)
            };
            let n_moved = n.image_under(&p1_loop.value_at(&beta)?);
            let m_moved = {
                let p_n_moved = SimpleFactorSpec::So {
                    alpha: beta.clone(),
                    line: n_moved.clone(),
                };
                let p_n = SimpleFactorSpec::So {
                    alpha: beta.clone(),
                    line: n.clone(),
                };
                let dressed = p_n_moved
                    .materialize()?
                    .mul(&p1_loop)
                    .mul(&p_n.inverse_closed_form()?);
                m.image_under(&dressed.value_at(&beta)?)
            };
            let p1hat = SimpleFactorSpec::G2Pair {
                alpha: alpha.clone(),
                l: l_moved,
                k: k_moved,
            };
            let p2hat = SimpleFactorSpec::G2Pair {
                alpha: beta.clone(),
                l: m_moved,
                k: n_moved,
            };
            p1hat.validate()?;
            p2hat.validate()?;
            (p2hat, p1hat)
        }
    };
    // the exchanged products must agree exactly
    let lhs = p2hat.materialize()?.mul(&p1.materialize()?);
    let rhs = p1hat.materialize()?.mul(&p2.materialize()?);
    if lhs != rhs {
        return Err(Error::SpecInvalid(
            "permutability identity failed to close".into(),
        ));
    }
    Ok((p2hat, p1hat))
}

fn as_pair(p: &SimpleFactorSpec) -> (Subspace, Subspace) {
    match p {
        SimpleFactorSpec::G2Plane { plane, .. } => plane_hermitian_split(plane),
        SimpleFactorSpec::G2Pair { l, k, .. } => (l.clone(), k.clone()),
        _ => unreachable!("pair conversion is exceptional-family only"),
    }
}

/// Dressing preserves membership of the conjugated loop; exposed as a
/// helper for the verification suites.
pub fn dressed_is_member(out: &DressingOutcome, p: &SimpleFactorSpec) -> bool {
    membership(&out.conjugated, &p.group_context()).member
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::basis_vec;
    use crate::loops::{laurent_at, symmetry_check, GroupKind};
    use crate::octonion::WeightFrame;
    use crate::sampling::{random_loop, random_spec_at, rng_from_seed};

    #[test]
    fn dressing_by_identity_is_trivial() {
        let mut rng = rng_from_seed(51);
        for kind in [
            GroupKind::OrthogonalSo(3),
            GroupKind::ConformalSymplectic(1),
            GroupKind::G2Fund,
        ] {
            let spec = random_spec_at(kind, &Gq::from_ints(1, 1), &mut rng).unwrap();
            let h = MLoop::identity(kind.ambient());
            let out = dress(&spec, &h).unwrap();
            assert!(out.conjugated.is_identity(), "{kind:?}");
        }
    }

    #[test]
    fn dressing_by_constant_returns_it() {
        let mut rng = rng_from_seed(52);
        // a constant orthogonal matrix is the value of a real loop at a
        // real point
        let (g, _) = random_loop(GroupKind::OrthogonalSo(4), 2, 1, &mut rng).unwrap();
        let c = g.value_at(&Gq::from_int(3)).unwrap();
        let h = MLoop::constant(&c);
        let spec = random_spec_at(GroupKind::OrthogonalSo(4), &Gq::from_ints(0, 1), &mut rng)
            .unwrap();
        let out = dress(&spec, &h).unwrap();
        assert_eq!(out.conjugated, h);
        // the moved line is the inverse image
        match (&spec, &out.right) {
            (
                SimpleFactorSpec::So { line, .. },
                SimpleFactorSpec::So { line: moved, .. },
            ) => {
                let c_inv = c.inverse().unwrap();
                assert_eq!(*moved, line.image_under(&c_inv));
            }
            _ => panic!("unexpected variants"),
        }
    }

    #[test]
    fn dressing_removes_the_pole() {
        let mut rng = rng_from_seed(53);
        for kind in [
            GroupKind::ConformalSymplectic(2),
            GroupKind::OrthogonalSo(5),
            GroupKind::G2Fund,
        ] {
            let spec = random_spec_at(kind, &Gq::from_ints(0, 1), &mut rng).unwrap();
            let (h, _) = {
                // h holomorphic at the dressing pole: use a distinct pole
                let mut h;
                loop {
                    h = random_loop(kind, 2, 1, &mut rng).unwrap();
                    let bad = h
                        .0
                        .entries()
                        .iter()
                        .any(|e| e.pole_order(&Gq::from_ints(0, 1)) > 0
                            || e.pole_order(&Gq::from_ints(0, -1)) > 0);
                    if !bad {
                        break;
                    }
                }
                h
            };
            let out = dress(&spec, &h).unwrap();
            let (_, deg) = laurent_at(&out.conjugated, spec.alpha(), 0).unwrap();
            assert_eq!(deg.k, 0, "{kind:?}");
            assert!(dressed_is_member(&out, &spec), "{kind:?}");
            let sym = symmetry_check(&out.conjugated, &spec.group_context(), None);
            assert!(sym.real && sym.normalized, "{kind:?}");
        }
    }

    #[test]
    fn permutability_identities() {
        let mut rng = rng_from_seed(54);
        // conformal symplectic with V = W: the value acts by a scalar, so
        // the moved subspaces coincide with the originals
        let w = crate::sampling::random_lagrangian(2, false, &mut rng);
        let p1 = SimpleFactorSpec::Csp {
            alpha: Gq::from_ints(1, 1),
            w: w.clone(),
        };
        let p2 = SimpleFactorSpec::Csp {
            alpha: Gq::from_ints(0, 2),
            w: w.clone(),
        };
        let (p2hat, p1hat) = permute(&p1, &p2).unwrap();
        match (&p2hat, &p1hat) {
            (SimpleFactorSpec::Csp { w: a, .. }, SimpleFactorSpec::Csp { w: b, .. }) => {
                assert_eq!(*a, w);
                assert_eq!(*b, w);
            }
            _ => panic!("unexpected variants"),
        }

        // orthogonal family, random lines
        let p1 = random_spec_at(GroupKind::OrthogonalSo(5), &Gq::i(), &mut rng).unwrap();
        let p2 =
            random_spec_at(GroupKind::OrthogonalSo(5), &Gq::from_ints(0, 2), &mut rng).unwrap();
        permute(&p1, &p2).unwrap();

        // exceptional family, weight-frame pairs
        let frame = WeightFrame::standard();
        let p1 = SimpleFactorSpec::G2Pair {
            alpha: Gq::i(),
            l: frame.l1.clone(),
            k: frame.l2.clone(),
        };
        let kv = crate::linalg::matrix::vec_add(
            &frame.l2.basis().column(0),
            &frame.l1.conj().basis().column(0),
        );
        let p2 = SimpleFactorSpec::G2Pair {
            alpha: Gq::from_ints(1, 1),
            l: frame.l1.clone(),
            k: Subspace::line(&kv),
        };
        let (p2hat, p1hat) = permute(&p1, &p2).unwrap();
        // pole pairs are exchanged, data validated inside permute
        assert_eq!(p2hat.alpha(), p2.alpha());
        assert_eq!(p1hat.alpha(), p1.alpha());
    }

    #[test]
    fn pole_clash_rejected() {
        let mut v = basis_vec(3, 0);
        v[1] = Gq::i();
        let p1 = SimpleFactorSpec::So {
            alpha: Gq::i(),
            line: Subspace::line(&v),
        };
        let p2 = SimpleFactorSpec::So {
            alpha: -Gq::i(),
            line: Subspace::line(&v),
        };
        assert_eq!(permute(&p1, &p2), Err(Error::PoleClash));
    }

    #[test]
    fn dressing_then_inverse_restores() {
        let mut rng = rng_from_seed(55);
        let kind = GroupKind::ConformalSymplectic(1);
        let spec = random_spec_at(kind, &Gq::from_ints(0, 1), &mut rng).unwrap();
        let (h, _) = random_loop(kind, 1, 1, &mut rng).unwrap();
        if h.entries()
            .iter()
            .any(|e| e.pole_order(&Gq::from_ints(0, 1)) > 0 || e.pole_order(&Gq::from_ints(0, -1)) > 0)
        {
            return; // seed collision with the dressing pole; vacuous
        }
        let out = dress(&spec, &h).unwrap();
        // conjugating back with the factor inverses restores h
        let restored = spec
            .inverse_closed_form()
            .unwrap()
            .mul(&out.conjugated)
            .mul(&out.right.materialize().unwrap());
        assert_eq!(restored, h);
    }
}
