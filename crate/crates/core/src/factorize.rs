//! Factorization of rational loops into simple factors: strictly decrease
//! the total degree at each pole until the residual is pole-free, then
//! conclude it is the identity.
//!
//! Drivers exist for the orthogonal, conformal-symplectic, and exceptional
//! families, plus a twisted driver that emits individually-twisted factors.
//! Every driver validates its input eagerly, audits each step, and enforces
//! an iteration budget as a guard against invalid inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::scalar::Gq;
use crate::linalg::forms::{extend_to_lagrangian, LagrangianFlavor};
use crate::linalg::matrix::{basis_vec, vec_add, vec_conj, vec_is_zero, vec_scale, Mat};
use crate::linalg::subspace::Subspace;
use crate::linalg::{antilinear_fixed_line, symplectic_j, Form};
use crate::loops::{
    laurent_at, membership, pole_spectrum, symmetry_check, GroupContext, GroupKind, MLoop,
    TwistContext, TwistFlavor,
};
use crate::octonion::{is_coassociative, multiplier_plane, mul_im7};
use crate::sampling::flavor_group;
use crate::simple::{
    make_twisted_q, pair_plane, plane_hermitian_split, validate_loop, SimpleFactorSpec,
    TwistedQSpec,
};

#[derive(Clone, Debug, PartialEq)]
pub enum FactorSpec {
    Simple(SimpleFactorSpec),
    TwistedQ(TwistedQSpec),
}

/// One recorded factor. `inverted` means the factor contributes the exact
/// inverse of the spec's materialization, so the ordered product of all
/// entries reconstructs the input loop without special cases.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorEntry {
    pub spec: FactorSpec,
    pub inverted: bool,
}

impl FactorEntry {
    pub fn plain(spec: SimpleFactorSpec) -> Self {
        FactorEntry {
            spec: FactorSpec::Simple(spec),
            inverted: false,
        }
    }

    pub fn materialize(&self) -> Result<MLoop> {
        match (&self.spec, self.inverted) {
            (FactorSpec::Simple(s), false) => s.materialize(),
            (FactorSpec::Simple(s), true) => s.inverse_closed_form(),
            (FactorSpec::TwistedQ(q), false) => Ok(make_twisted_q(q)?.0),
            (FactorSpec::TwistedQ(q), true) => {
                let (_, parts) = make_twisted_q(q)?;
                let mut out = MLoop::identity(q.base.ambient());
                for part in parts.iter().rev() {
                    out = out.mul(&part.inverse_closed_form()?);
                }
                Ok(out)
            }
        }
    }

    /// Twistedness of the materialized factor, for the given flavor.
    pub fn is_twisted(&self, twist: &TwistContext) -> Result<bool> {
        let g = self.materialize()?;
        let ctx = match &self.spec {
            FactorSpec::Simple(s) => s.group_context(),
            FactorSpec::TwistedQ(q) => q.base.group_context(),
        };
        Ok(symmetry_check(&g, &ctx, Some(twist)).twisted == Some(true))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "measure")]
pub enum StepMeasure {
    Degree { k: u32, rank: usize },
    DetZero { order: u32 },
}

impl StepMeasure {
    fn strictly_decreased(&self, after: &StepMeasure) -> bool {
        match (self, after) {
            (StepMeasure::Degree { k, rank }, StepMeasure::Degree { k: k2, rank: r2 }) => {
                (k2, r2) < (k, rank)
            }
            (StepMeasure::DetZero { order }, StepMeasure::DetZero { order: o2 }) => o2 < order,
            // moving from the pole phase to the zero phase is progress
            (StepMeasure::Degree { .. }, StepMeasure::DetZero { .. }) => true,
            (StepMeasure::DetZero { .. }, StepMeasure::Degree { .. }) => false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditStep {
    pub pole: String,
    pub branch: String,
    pub before: StepMeasure,
    pub after: StepMeasure,
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    /// Leftmost applied last: the ordered product of the materialized
    /// entries equals the input loop exactly.
    pub factors: Vec<FactorEntry>,
    pub steps: Vec<AuditStep>,
}

impl FactorizationResult {
    pub fn product(&self, n: usize) -> Result<MLoop> {
        let mut out = MLoop::identity(n);
        for entry in &self.factors {
            out = out.mul(&entry.materialize()?);
        }
        Ok(out)
    }
}

/// Exact product check: the ordered factors reconstruct the loop.
pub fn verify_product(result: &FactorizationResult, g: &MLoop) -> bool {
    match result.product(g.n()) {
        Ok(p) => p == *g,
        Err(_) => false,
    }
}

fn im_positive(x: &Gq) -> bool {
    x.im_positive()
}

fn re_negative(x: &Gq) -> bool {
    x.re_negative()
}

fn upper_half(x: &Gq) -> Gq {
    if im_positive(x) {
        x.clone()
    } else {
        x.conj()
    }
}

/// First-quadrant representative of the orbit {x, conj x, -x, -conj x}.
fn orbit_rep(x: &Gq) -> Gq {
    let u = upper_half(x);
    if re_negative(&u) {
        -&u.conj()
    } else {
        u
    }
}

fn det_zero_order(g: &MLoop, alpha: &Gq) -> u32 {
    let det = g.det();
    debug_assert!(!det.is_zero());
    if det.pole_order(alpha) > 0 {
        return 0;
    }
    det.zero_order(alpha)
}

/// Iteration guard: generous multiple of the total pole and zero structure.
/// Groups with identically-one determinant have no zero phase, so the
/// determinant is only computed when it can vanish.
fn iteration_budget(g: &MLoop, has_zero_phase: bool) -> Result<u64> {
    let n = g.n() as u64;
    let det = if has_zero_phase { Some(g.det()) } else { None };
    let mut budget: u64 = 16;
    for (pole, deg) in pole_spectrum(g)? {
        let mut dz = 0u64;
        if let Some(det) = &det {
            for loc in [pole.clone(), pole.conj()] {
                if det.pole_order(&loc) == 0 {
                    dz += det.zero_order(&loc) as u64;
                }
            }
        }
        budget += 4 * (2 * deg.k as u64 * n + dz);
    }
    Ok(budget)
}

struct Driver {
    current: MLoop,
    factors: Vec<FactorEntry>,
    steps: Vec<AuditStep>,
    iterations: u64,
    budget: u64,
}

impl Driver {
    fn new(g: &MLoop, has_zero_phase: bool) -> Result<Self> {
        Ok(Driver {
            current: g.clone(),
            factors: Vec::new(),
            steps: Vec::new(),
            iterations: 0,
            budget: iteration_budget(g, has_zero_phase)?,
        })
    }

    fn tick(&mut self) -> Result<()> {
        self.iterations += 1;
        if self.iterations > self.budget {
            return Err(Error::NonTermination);
        }
        Ok(())
    }

    /// Left-multiply the running loop and record the entry whose
    /// materialization is the inverse of the multiplier.
    fn apply(&mut self, multiplier: &MLoop, record: FactorEntry) {
        self.current = multiplier.mul(&self.current);
        self.factors.push(record);
    }

    fn audit(&mut self, pole: &Gq, branch: &str, before: StepMeasure, after: StepMeasure) -> Result<()> {
        if !before.strictly_decreased(&after) {
            return Err(Error::NonTermination);
        }
        self.steps.push(AuditStep {
            pole: pole.to_string(),
            branch: branch.to_string(),
            before,
            after,
        });
        Ok(())
    }

    fn finish(self) -> Result<FactorizationResult> {
        if !self.current.is_identity() {
            return Err(Error::LiouvilleResidual);
        }
        Ok(FactorizationResult {
            factors: self.factors,
            steps: self.steps,
        })
    }
}

fn first_line(s: &Subspace) -> Result<Subspace> {
    s.first_basis_vector()
        .map(|v| Subspace::line(&v))
        .ok_or_else(|| Error::RankSurprise("empty image".into()))
}

/// Factor a conformal symplectic loop into Lagrangian simple factors.
pub fn factor_csp(g: &MLoop) -> Result<FactorizationResult> {
    let rank = g.n() / 2;
    let ctx = GroupContext::new(GroupKind::ConformalSymplectic(rank));
    validate_loop(g, &ctx)?;
    let mut drv = Driver::new(g, true)?;
    loop {
        let spectrum = pole_spectrum(&drv.current)?;
        let Some((pole, _)) = spectrum.first() else {
            break;
        };
        let alpha = upper_half(pole);
        csp_clear_at(&mut drv, &ctx, &alpha, false)?;
    }
    drv.finish()
}

/// Remove the pole and any zero of a conformal symplectic loop at one
/// location. In twisted mode the Lagrangian choices respect the twist and
/// the recorded factors are twisted generators.
fn csp_clear_at(drv: &mut Driver, ctx: &GroupContext, alpha: &Gq, twisted: bool) -> Result<()> {
    let rank = drv.current.n() / 2;
    let imaginary_pole = alpha.is_imaginary();
    // pole phase
    loop {
        drv.tick()?;
        let (exp, deg) = laurent_at(&drv.current, alpha, 0)?;
        if deg.k == 0 {
            break;
        }
        let rep = membership(&drv.current, ctx);
        let c = rep.multiplier.ok_or_else(|| {
            Error::NotAMember("conformal multiplier disappeared mid-run".into())
        })?;
        let c_pole = c.pole_order(alpha);
        let (w, branch) = if c_pole == 2 * deg.k {
            // lowest coefficient invertible; any Lagrangian works
            (standard_lagrangian(rank), "invertible-multiplier")
        } else {
            let image = Subspace::column_space(exp.coeff(-(deg.k as i64)));
            let flavor = if twisted && imaginary_pole {
                LagrangianFlavor::Real
            } else {
                LagrangianFlavor::Any
            };
            (extend_to_lagrangian(&image, flavor)?, "isotropic-extension")
        };
        let spec = SimpleFactorSpec::Csp {
            alpha: alpha.clone(),
            w,
        };
        let multiplier = spec.materialize()?;
        let entry = csp_entry(&spec, twisted, imaginary_pole, true)?;
        drv.apply(&multiplier, entry);
        let (_, after) = laurent_at(&drv.current, alpha, 0)?;
        drv.audit(
            alpha,
            branch,
            StepMeasure::Degree {
                k: deg.k,
                rank: deg.rank,
            },
            StepMeasure::Degree {
                k: after.k,
                rank: after.rank,
            },
        )?;
    }
    // zero phase
    loop {
        drv.tick()?;
        let dz = det_zero_order(&drv.current, alpha);
        if dz == 0 {
            break;
        }
        let g0 = drv.current.value_at(alpha)?;
        let (w, branch) = if g0.is_zero() {
            (standard_lagrangian(rank), "value-strip")
        } else {
            let image = Subspace::column_space(&g0);
            let flavor = if twisted && imaginary_pole {
                LagrangianFlavor::Real
            } else {
                LagrangianFlavor::Any
            };
            let w1 = extend_to_lagrangian(&image, flavor)?;
            // W = J conj(W1) has hermitian complement W1, which contains
            // the image of the value.
            let w = w1.conj().image_under(&symplectic_j(2 * rank));
            (w, "det-zero")
        };
        let spec = SimpleFactorSpec::Csp {
            alpha: alpha.clone(),
            w,
        };
        let multiplier = spec.inverse_closed_form()?;
        let entry = csp_entry(&spec, twisted, imaginary_pole, false)?;
        drv.apply(&multiplier, entry);
        let after = det_zero_order(&drv.current, alpha);
        drv.audit(
            alpha,
            branch,
            StepMeasure::DetZero { order: dz },
            StepMeasure::DetZero { order: after },
        )?;
    }
    Ok(())
}

/// Entry recorded for a conformal-symplectic step. `pole_phase` means the
/// multiplier was the factor itself (so the entry is its inverse).
fn csp_entry(
    spec: &SimpleFactorSpec,
    twisted: bool,
    imaginary_pole: bool,
    pole_phase: bool,
) -> Result<FactorEntry> {
    if !twisted || imaginary_pole {
        // untwisted runs and axis factors record plain simple specs
        return Ok(FactorEntry::plain(if pole_phase {
            spec.inverse_spec()
        } else {
            spec.clone()
        }));
    }
    let q = TwistedQSpec {
        base: spec.clone(),
        twist: TwistContext::new(TwistFlavor::CspUnitary),
    };
    Ok(FactorEntry {
        spec: FactorSpec::TwistedQ(q),
        inverted: pole_phase,
    })
}

fn standard_lagrangian(rank: usize) -> Subspace {
    let vs: Vec<_> = (0..rank).map(|i| basis_vec(2 * rank, i)).collect();
    Subspace::from_vectors(2 * rank, &vs)
}

/// Factor an orthogonal loop into isotropic-line simple factors.
pub fn factor_so(g: &MLoop) -> Result<FactorizationResult> {
    let n = g.n();
    let ctx = GroupContext::new(GroupKind::OrthogonalSo(n));
    validate_loop(g, &ctx)?;
    let mut drv = Driver::new(g, false)?;
    loop {
        let spectrum = pole_spectrum(&drv.current)?;
        let Some((pole, _)) = spectrum.first() else {
            break;
        };
        let alpha = upper_half(pole);
        loop {
            drv.tick()?;
            let (exp, deg) = laurent_at(&drv.current, &alpha, 0)?;
            if deg.k == 0 {
                break;
            }
            let image = Subspace::column_space(exp.coeff(-(deg.k as i64)));
            let line = first_line(&image)?;
            let spec = SimpleFactorSpec::So {
                alpha: alpha.clone(),
                line,
            };
            let multiplier = spec.materialize()?;
            drv.apply(&multiplier, FactorEntry::plain(spec.inverse_spec()));
            let (_, after) = laurent_at(&drv.current, &alpha, 0)?;
            drv.audit(
                &alpha,
                "line-reduction",
                StepMeasure::Degree {
                    k: deg.k,
                    rank: deg.rank,
                },
                StepMeasure::Degree {
                    k: after.k,
                    rank: after.rank,
                },
            )?;
        }
    }
    drv.finish()
}

/// Two orthogonal line-reduction steps at `pole`, which must carry a simple
/// pole of rank two. Returns the reduced loop and the two lines; the input
/// equals p_{conj pole, first} p_{conj pole, second} times the reduced loop.
fn so_pair_reduce(
    current: &MLoop,
    pole: &Gq,
    first: Option<Subspace>,
) -> Result<(MLoop, Subspace, Subspace)> {
    let (exp, deg) = laurent_at(current, pole, 0)?;
    if deg.k != 1 || deg.rank != 2 {
        return Err(Error::RankSurprise(format!(
            "pair reduction expects degree (1, 2), found ({}, {})",
            deg.k, deg.rank
        )));
    }
    let image = Subspace::column_space(exp.coeff(-1));
    let line1 = match first {
        Some(l) => {
            if !image.contains(&l) {
                return Err(Error::RankSurprise(
                    "chosen first line is not inside the lowest image".into(),
                ));
            }
            l
        }
        None => first_line(&image)?,
    };
    let p1 = SimpleFactorSpec::So {
        alpha: pole.clone(),
        line: line1.clone(),
    };
    let mid = p1.materialize()?.mul(current);
    let (exp2, deg2) = laurent_at(&mid, pole, 0)?;
    if deg2.k != 1 || deg2.rank != 1 {
        return Err(Error::RankSurprise(format!(
            "pair reduction mid-degree should be (1, 1), found ({}, {})",
            deg2.k, deg2.rank
        )));
    }
    let line2 = first_line(&Subspace::column_space(exp2.coeff(-1)))?;
    let p2 = SimpleFactorSpec::So {
        alpha: pole.clone(),
        line: line2.clone(),
    };
    let reduced = p2.materialize()?.mul(&mid);
    let (_, deg3) = laurent_at(&reduced, pole, 0)?;
    if deg3.k != 0 {
        return Err(Error::RankSurprise("pair reduction left a pole".into()));
    }
    Ok((reduced, line1, line2))
}

/// Resolve a pair of lines (satisfying the simple-pole-pair conditions at
/// `alpha`) into one or two coassociative-plane factors at `alpha`.
fn split_pair_specs(alpha: &Gq, l: &Subspace, k: &Subspace) -> Result<Vec<SimpleFactorSpec>> {
    let pair = SimpleFactorSpec::G2Pair {
        alpha: alpha.clone(),
        l: l.clone(),
        k: k.clone(),
    };
    pair.validate()?;
    let herm = Form::hermitian(7);
    let lv = l.basis().column(0);
    let kv = k.basis().column(0);
    let in_middle = herm.apply(&lv, &kv).is_zero() && herm.apply(&vec_conj(&lv), &kv).is_zero();
    if in_middle {
        let plane = l.sum(k);
        if !is_coassociative(&plane) {
            return Err(Error::NoSplittingLine);
        }
        let spec = SimpleFactorSpec::G2Plane {
            alpha: alpha.clone(),
            plane,
        };
        debug_assert_eq!(spec.materialize()?, pair.materialize()?);
        return Ok(vec![spec]);
    }
    // Solve for the splitting line R in the multiplier plane of L with
    // conj(R) * K = 0; the condition is linear in the conjugated
    // coordinates of R.
    let b = multiplier_plane(l)?;
    let bb = b.basis_vectors();
    let c0 = mul_im7(&vec_conj(&bb[0]), &kv);
    let c1 = mul_im7(&vec_conj(&bb[1]), &kv);
    let system = Mat::from_fn(7, 2, |r, c| {
        if c == 0 {
            c0[r].clone()
        } else {
            c1[r].clone()
        }
    });
    let kernel = system.kernel();
    let Some(sol) = kernel.first() else {
        return Err(Error::NoSplittingLine);
    };
    let x = sol[0].conj();
    let y = sol[1].conj();
    let r_vec = vec_add(&vec_scale(&bb[0], &x), &vec_scale(&bb[1], &y));
    if vec_is_zero(&r_vec) {
        return Err(Error::NoSplittingLine);
    }
    let r_line = Subspace::line(&r_vec);
    let c1_plane = l.sum(&r_line);
    let c2_plane = r_line.conj().sum(k);
    if !is_coassociative(&c1_plane) || !is_coassociative(&c2_plane) {
        return Err(Error::NoSplittingLine);
    }
    let s1 = SimpleFactorSpec::G2Plane {
        alpha: alpha.clone(),
        plane: c1_plane,
    };
    let s2 = SimpleFactorSpec::G2Plane {
        alpha: alpha.clone(),
        plane: c2_plane,
    };
    // The two plane factors must reproduce the pair exactly.
    let recomposed = s1.materialize()?.mul(&s2.materialize()?);
    if recomposed != pair.materialize()? {
        return Err(Error::NoSplittingLine);
    }
    Ok(vec![s1, s2])
}

/// Split a loop whose only poles are simple ones at alpha and conj(alpha)
/// into one or two coassociative-plane factors at alpha.
pub fn split_simple_pole_pair(g: &MLoop) -> Result<Vec<SimpleFactorSpec>> {
    let ctx = GroupContext::new(GroupKind::G2Fund);
    validate_loop(g, &ctx)?;
    let spectrum = pole_spectrum(g)?;
    if spectrum.is_empty() {
        return Ok(vec![]);
    }
    let alpha = upper_half(&spectrum[0].0);
    for (pole, deg) in &spectrum {
        if *pole != alpha && *pole != alpha.conj() {
            return Err(Error::RankSurprise(
                "loop has poles at more than one conjugate pair".into(),
            ));
        }
        if deg.k != 1 {
            return Err(Error::RankSurprise("pole is not simple".into()));
        }
    }
    // Reduce at the conjugate location so the extracted pair lives at alpha.
    let (residual, l, k) = so_pair_reduce(g, &alpha.conj(), None)?;
    if !residual.is_identity() {
        return Err(Error::LiouvilleResidual);
    }
    split_pair_specs(&alpha, &l, &k)
}

/// Factor an exceptional-family loop into coassociative-plane factors.
pub fn factor_g2(g: &MLoop) -> Result<FactorizationResult> {
    let ctx = GroupContext::new(GroupKind::G2Fund);
    validate_loop(g, &ctx)?;
    let mut drv = Driver::new(g, false)?;
    loop {
        let spectrum = pole_spectrum(&drv.current)?;
        let Some((pole, _)) = spectrum.first() else {
            break;
        };
        let alpha = upper_half(pole);
        loop {
            drv.tick()?;
            let (exp, deg) = laurent_at(&drv.current, &alpha, 1)?;
            if deg.k == 0 {
                break;
            }
            if deg.rank > 2 {
                return Err(Error::RankSurprise(format!(
                    "lowest coefficient has rank {} > 2",
                    deg.rank
                )));
            }
            if deg.k >= 2 {
                let plane = g2_high_order_plane(&exp, deg.k, None)?;
                let spec = SimpleFactorSpec::G2Plane {
                    alpha: alpha.clone(),
                    plane,
                };
                let multiplier = spec.materialize()?;
                drv.apply(&multiplier, FactorEntry::plain(spec.inverse_spec()));
                let (_, after) = laurent_at(&drv.current, &alpha, 0)?;
                drv.audit(
                    &alpha,
                    "plane-reduction",
                    StepMeasure::Degree {
                        k: deg.k,
                        rank: deg.rank,
                    },
                    StepMeasure::Degree {
                        k: after.k,
                        rank: after.rank,
                    },
                )?;
            } else {
                // simple pole: extract the pair at alpha by reducing here,
                // recording the split factors at the conjugate location
                let (reduced, l1, l2) = so_pair_reduce(&drv.current, &alpha, None)?;
                let specs = split_pair_specs(&alpha.conj(), &l1, &l2)?;
                drv.current = reduced;
                for spec in specs {
                    drv.factors.push(FactorEntry::plain(spec));
                }
                drv.audit(
                    &alpha,
                    "pair-split",
                    StepMeasure::Degree {
                        k: deg.k,
                        rank: deg.rank,
                    },
                    StepMeasure::Degree { k: 0, rank: 7 },
                )?;
            }
        }
    }
    drv.finish()
}

/// The plane choice for a pole of order at least two: a line L in the
/// lowest image, and a partner M in its multiplier plane annihilating the
/// next coefficient's image of the chosen preimage. `fixed_v` overrides the
/// preimage (used by the twisted driver to keep the choice symmetric).
fn g2_high_order_plane(
    exp: &crate::loops::LaurentExpansion,
    k: u32,
    symmetric: Option<(&Mat, &Subspace)>,
) -> Result<Subspace> {
    let low = exp.coeff(-(k as i64));
    let next = exp.coeff(-(k as i64) + 1);
    let (line, v) = match symmetric {
        None => {
            let v = (0..7)
                .map(|i| basis_vec(7, i))
                .find(|e| !vec_is_zero(&low.apply(e)))
                .ok_or_else(|| Error::RankSurprise("lowest coefficient vanished".into()))?;
            (Subspace::line(&low.apply(&v)), v)
        }
        Some((s, image)) => {
            // fixed line of the antilinear involution, with a symmetric
            // preimage so the annihilation condition is itself symmetric
            let line = antilinear_fixed_line(image, s)?;
            let ell = crate::linalg::antilinear_fixed_vector(&line, s)?;
            let u = low
                .solve(&ell)
                .ok_or_else(|| Error::RankSurprise("no preimage of the fixed line".into()))?;
            let v = vec_add(&u, &s.apply(&vec_conj(&u)));
            if vec_is_zero(&low.apply(&v)) {
                return Err(Error::RankSurprise("symmetric preimage degenerated".into()));
            }
            (line, v)
        }
    };
    let b = multiplier_plane(&line)?;
    let bb = b.basis_vectors();
    let w_next = next.apply(&v);
    let bil = Form::bilinear(7);
    let c0 = bil.apply(&w_next, &bb[0]);
    let c1 = bil.apply(&w_next, &bb[1]);
    let m_line = if c0.is_zero() && c1.is_zero() {
        match symmetric {
            None => Subspace::line(&bb[0]),
            Some((s, _)) => antilinear_fixed_line(&b, s)?,
        }
    } else {
        let m_vec = vec_add(
            &vec_scale(&bb[0], &c1),
            &vec_scale(&bb[1], &(-&c0)),
        );
        Subspace::line(&m_vec)
    };
    let plane = line.sum(&m_line);
    if !is_coassociative(&plane) {
        return Err(Error::RankSurprise(
            "constructed plane is not coassociative".into(),
        ));
    }
    Ok(plane)
}

/// Factor a twisted loop with every recorded factor individually twisted.
pub fn factor_twisted(g: &MLoop, twist: &TwistContext) -> Result<FactorizationResult> {
    let kind = flavor_group(twist.flavor, g.n());
    let ctx = GroupContext::new(kind);
    validate_loop(g, &ctx)?;
    let sym = symmetry_check(g, &ctx, Some(twist));
    if sym.twisted != Some(true) {
        return Err(Error::NotTwisted);
    }
    let zero_phase = matches!(kind, GroupKind::ConformalSymplectic(_));
    let mut drv = Driver::new(g, zero_phase)?;
    loop {
        let spectrum = pole_spectrum(&drv.current)?;
        let Some((pole, _)) = spectrum.first() else {
            break;
        };
        let alpha = orbit_rep(pole);
        if alpha.is_imaginary() {
            twisted_imaginary_pole(&mut drv, &ctx, twist, &alpha)?;
        } else {
            twisted_off_axis_pole(&mut drv, &ctx, twist, &alpha)?;
        }
    }
    drv.finish()
}

fn twisted_off_axis_pole(
    drv: &mut Driver,
    ctx: &GroupContext,
    twist: &TwistContext,
    alpha: &Gq,
) -> Result<()> {
    match ctx.kind {
        GroupKind::OrthogonalSo(_) => loop {
            drv.tick()?;
            let (exp, deg) = laurent_at(&drv.current, alpha, 0)?;
            if deg.k == 0 {
                break;
            }
            let image = Subspace::column_space(exp.coeff(-(deg.k as i64)));
            let line = first_line(&image)?;
            let q = TwistedQSpec {
                base: SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line,
                },
                twist: *twist,
            };
            let (q_loop, _) = make_twisted_q(&q)?;
            drv.apply(
                &q_loop,
                FactorEntry {
                    spec: FactorSpec::TwistedQ(q),
                    inverted: true,
                },
            );
            let (_, after) = laurent_at(&drv.current, alpha, 0)?;
            drv.audit(
                alpha,
                "q-line",
                StepMeasure::Degree {
                    k: deg.k,
                    rank: deg.rank,
                },
                StepMeasure::Degree {
                    k: after.k,
                    rank: after.rank,
                },
            )?;
        },
        GroupKind::ConformalSymplectic(rank) => {
            // pole phase with q-elements
            loop {
                drv.tick()?;
                let (exp, deg) = laurent_at(&drv.current, alpha, 0)?;
                if deg.k == 0 {
                    break;
                }
                let rep = membership(&drv.current, ctx);
                let c = rep
                    .multiplier
                    .ok_or_else(|| Error::NotAMember("multiplier lost".into()))?;
                let (w, branch) = if c.pole_order(alpha) == 2 * deg.k {
                    (standard_lagrangian(rank), "q-invertible")
                } else {
                    let image = Subspace::column_space(exp.coeff(-(deg.k as i64)));
                    (
                        extend_to_lagrangian(&image, LagrangianFlavor::Any)?,
                        "q-isotropic",
                    )
                };
                let q = TwistedQSpec {
                    base: SimpleFactorSpec::Csp {
                        alpha: alpha.clone(),
                        w,
                    },
                    twist: *twist,
                };
                let (q_loop, _) = make_twisted_q(&q)?;
                drv.apply(
                    &q_loop,
                    FactorEntry {
                        spec: FactorSpec::TwistedQ(q),
                        inverted: true,
                    },
                );
                let (_, after) = laurent_at(&drv.current, alpha, 0)?;
                drv.audit(
                    alpha,
                    branch,
                    StepMeasure::Degree {
                        k: deg.k,
                        rank: deg.rank,
                    },
                    StepMeasure::Degree {
                        k: after.k,
                        rank: after.rank,
                    },
                )?;
            }
            // zero phase with inverse q-elements
            loop {
                drv.tick()?;
                let dz = det_zero_order(&drv.current, alpha);
                if dz == 0 {
                    break;
                }
                let g0 = drv.current.value_at(alpha)?;
                let (w, branch) = if g0.is_zero() {
                    (standard_lagrangian(rank), "q-value-strip")
                } else {
                    let image = Subspace::column_space(&g0);
                    let w1 = extend_to_lagrangian(&image, LagrangianFlavor::Any)?;
                    (
                        w1.conj().image_under(&symplectic_j(2 * rank)),
                        "q-det-zero",
                    )
                };
                let q = TwistedQSpec {
                    base: SimpleFactorSpec::Csp {
                        alpha: alpha.clone(),
                        w,
                    },
                    twist: *twist,
                };
                // multiplier is the inverse of the q-element
                let (_, parts) = make_twisted_q(&q)?;
                let mut q_inv = MLoop::identity(drv.current.n());
                for part in parts.iter().rev() {
                    q_inv = q_inv.mul(&part.inverse_closed_form()?);
                }
                drv.apply(
                    &q_inv,
                    FactorEntry {
                        spec: FactorSpec::TwistedQ(q),
                        inverted: false,
                    },
                );
                let after = det_zero_order(&drv.current, alpha);
                drv.audit(
                    alpha,
                    branch,
                    StepMeasure::DetZero { order: dz },
                    StepMeasure::DetZero { order: after },
                )?;
            }
        }
        GroupKind::G2Fund => loop {
            drv.tick()?;
            let (exp, deg) = laurent_at(&drv.current, alpha, 1)?;
            if deg.k == 0 {
                break;
            }
            if deg.rank > 2 {
                return Err(Error::RankSurprise(format!(
                    "lowest coefficient has rank {} > 2",
                    deg.rank
                )));
            }
            if deg.k >= 2 {
                let plane = g2_high_order_plane(&exp, deg.k, None)?;
                let (l, k_line) = plane_hermitian_split(&plane);
                let q = TwistedQSpec {
                    base: SimpleFactorSpec::G2Pair {
                        alpha: alpha.clone(),
                        l,
                        k: k_line,
                    },
                    twist: *twist,
                };
                let (q_loop, _) = make_twisted_q(&q)?;
                drv.apply(
                    &q_loop,
                    FactorEntry {
                        spec: FactorSpec::TwistedQ(q),
                        inverted: true,
                    },
                );
            } else {
                // simple pole: the reducing pair lives at alpha itself
                let (exp1, _) = laurent_at(&drv.current, alpha, 0)?;
                let image = Subspace::column_space(exp1.coeff(-1));
                let line1 = first_line(&image)?;
                let p1 = SimpleFactorSpec::So {
                    alpha: alpha.clone(),
                    line: line1.clone(),
                };
                let mid = p1.materialize()?.mul(&drv.current);
                let (exp2, deg2) = laurent_at(&mid, alpha, 0)?;
                if deg2.k != 1 || deg2.rank != 1 {
                    return Err(Error::RankSurprise(
                        "twisted pair reduction lost the expected degree".into(),
                    ));
                }
                let line2 = first_line(&Subspace::column_space(exp2.coeff(-1)))?;
                // reducing multiplier is p_{alpha, line2} p_{alpha, line1},
                // a pair at alpha with (l, k) = (line2, line1)
                let q = TwistedQSpec {
                    base: SimpleFactorSpec::G2Pair {
                        alpha: alpha.clone(),
                        l: line2,
                        k: line1,
                    },
                    twist: *twist,
                };
                let (q_loop, _) = make_twisted_q(&q)?;
                drv.apply(
                    &q_loop,
                    FactorEntry {
                        spec: FactorSpec::TwistedQ(q),
                        inverted: true,
                    },
                );
            }
            let (_, after) = laurent_at(&drv.current, alpha, 0)?;
            drv.audit(
                alpha,
                if deg.k >= 2 { "q-plane" } else { "q-pair" },
                StepMeasure::Degree {
                    k: deg.k,
                    rank: deg.rank,
                },
                StepMeasure::Degree {
                    k: after.k,
                    rank: after.rank,
                },
            )?;
        },
        GroupKind::UnitaryGl(_) => {
            return Err(Error::SpecInvalid(
                "no twisted driver for the unitary family".into(),
            ))
        }
    }
    Ok(())
}

fn twisted_imaginary_pole(
    drv: &mut Driver,
    ctx: &GroupContext,
    twist: &TwistContext,
    alpha: &Gq,
) -> Result<()> {
    let s = twist.s_matrix(drv.current.n());
    match ctx.kind {
        GroupKind::OrthogonalSo(_) => loop {
            drv.tick()?;
            let (exp, deg) = laurent_at(&drv.current, alpha, 0)?;
            if deg.k == 0 {
                break;
            }
            let image = Subspace::column_space(exp.coeff(-(deg.k as i64)));
            let line = antilinear_fixed_line(&image, &s)?;
            let spec = SimpleFactorSpec::So {
                alpha: alpha.clone(),
                line,
            };
            let multiplier = spec.materialize()?;
            drv.apply(&multiplier, FactorEntry::plain(spec.inverse_spec()));
            let (_, after) = laurent_at(&drv.current, alpha, 0)?;
            drv.audit(
                alpha,
                "axis-line",
                StepMeasure::Degree {
                    k: deg.k,
                    rank: deg.rank,
                },
                StepMeasure::Degree {
                    k: after.k,
                    rank: after.rank,
                },
            )?;
        },
        GroupKind::ConformalSymplectic(_) => {
            csp_clear_at(drv, ctx, alpha, true)?;
        }
        GroupKind::G2Fund => loop {
            drv.tick()?;
            let (exp, deg) = laurent_at(&drv.current, alpha, 1)?;
            if deg.k == 0 {
                break;
            }
            if deg.rank > 2 {
                return Err(Error::RankSurprise(format!(
                    "lowest coefficient has rank {} > 2",
                    deg.rank
                )));
            }
            if deg.k >= 2 {
                let image = Subspace::column_space(exp.coeff(-(deg.k as i64)));
                let plane = g2_high_order_plane(&exp, deg.k, Some((&s, &image)))?;
                let spec = SimpleFactorSpec::G2Plane {
                    alpha: alpha.clone(),
                    plane,
                };
                let multiplier = spec.materialize()?;
                drv.apply(&multiplier, FactorEntry::plain(spec.inverse_spec()));
            } else {
                // simple imaginary pole: extract the pair at alpha by
                // reducing at the conjugate, first line fixed by the twist
                let conj = alpha.conj();
                let (exp_c, _) = laurent_at(&drv.current, &conj, 0)?;
                let image = Subspace::column_space(exp_c.coeff(-1));
                let fixed = antilinear_fixed_line(&image, &s)?;
                let (reduced, m_line, n_line) =
                    so_pair_reduce(&drv.current, &conj, Some(fixed))?;
                // the extracted pair at alpha must itself be twisted
                let pair = SimpleFactorSpec::G2Pair {
                    alpha: alpha.clone(),
                    l: m_line.clone(),
                    k: n_line.clone(),
                };
                pair.validate()?;
                let pair_loop = pair.materialize()?;
                let sym = symmetry_check(&pair_loop, ctx, Some(twist));
                if sym.twisted != Some(true) {
                    return Err(Error::NotTwisted);
                }
                drv.current = reduced;
                drv.factors.push(FactorEntry::plain(pair));
            }
            let (_, after) = laurent_at(&drv.current, alpha, 0)?;
            drv.audit(
                alpha,
                if deg.k >= 2 { "axis-plane" } else { "axis-pair" },
                StepMeasure::Degree {
                    k: deg.k,
                    rank: deg.rank,
                },
                StepMeasure::Degree {
                    k: after.k,
                    rank: after.rank,
                },
            )?;
        },
        GroupKind::UnitaryGl(_) => {
            return Err(Error::SpecInvalid(
                "no twisted driver for the unitary family".into(),
            ))
        }
    }
    Ok(())
}

/// Check a pair-plane attachment exists (exported for diagnostics).
pub fn pair_is_valid(alpha: &Gq, l: &Subspace, k: &Subspace) -> bool {
    SimpleFactorSpec::G2Pair {
        alpha: alpha.clone(),
        l: l.clone(),
        k: k.clone(),
    }
    .validate()
    .is_ok()
        && pair_plane(l, k).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octonion::WeightFrame;
    use crate::sampling::{random_loop, random_twisted_loop, rng_from_seed};

    #[test]
    fn identity_factors_empty() {
        type FactorFn = fn(&MLoop) -> Result<FactorizationResult>;
        let cases: [(GroupKind, FactorFn); 3] = [
            (GroupKind::OrthogonalSo(3), factor_so),
            (GroupKind::ConformalSymplectic(1), factor_csp),
            (GroupKind::G2Fund, factor_g2),
        ];
        for (kind, factor) in cases {
            let id = MLoop::identity(kind.ambient());
            let res = factor(&id).unwrap();
            assert!(res.factors.is_empty());
            assert!(verify_product(&res, &id));
        }
    }

    #[test]
    fn single_so_factor_roundtrip() {
        let mut v = basis_vec(3, 0);
        v[1] = Gq::i();
        let spec = SimpleFactorSpec::So {
            alpha: Gq::i(),
            line: Subspace::line(&v),
        };
        let g = spec.materialize().unwrap();
        let res = factor_so(&g).unwrap();
        assert!(verify_product(&res, &g));
        for w in res.steps.windows(1) {
            assert!(w[0].before.strictly_decreased(&w[0].after));
        }
    }

    #[test]
    fn single_csp_factor_roundtrip() {
        let spec = SimpleFactorSpec::Csp {
            alpha: Gq::i(),
            w: standard_lagrangian(2),
        };
        let g = spec.materialize().unwrap();
        let res = factor_csp(&g).unwrap();
        assert!(verify_product(&res, &g));
    }

    #[test]
    fn single_g2_factor_roundtrip() {
        let frame = WeightFrame::standard();
        let spec = SimpleFactorSpec::G2Plane {
            alpha: Gq::i(),
            plane: frame.standard_plane(),
        };
        let g = spec.materialize().unwrap();
        let res = factor_g2(&g).unwrap();
        assert!(verify_product(&res, &g));
    }

    #[test]
    fn random_products_reconstruct() {
        let mut rng = rng_from_seed(31);
        let cases: [(GroupKind, fn(&MLoop) -> Result<FactorizationResult>); 3] = [
            (GroupKind::OrthogonalSo(5), factor_so as _),
            (GroupKind::ConformalSymplectic(2), factor_csp as _),
            (GroupKind::G2Fund, factor_g2 as _),
        ];
        for (kind, factor) in cases {
            for _ in 0..3 {
                let (g, _) = random_loop(kind, 3, 2, &mut rng).unwrap();
                let res = factor(&g).unwrap_or_else(|e| panic!("{kind:?}: {e}"));
                assert!(verify_product(&res, &g), "{kind:?}");
            }
        }
    }

    #[test]
    fn verify_detects_tampering() {
        let mut rng = rng_from_seed(32);
        let (g, _) = random_loop(GroupKind::OrthogonalSo(3), 2, 1, &mut rng).unwrap();
        let res = factor_so(&g).unwrap();
        assert!(verify_product(&res, &g));
        if res.factors.len() >= 2 {
            let mut dropped = res.clone();
            dropped.factors.remove(0);
            assert!(!verify_product(&dropped, &g));
            let mut swapped = res.clone();
            swapped.factors.swap(0, 1);
            // swapping commuting factors can preserve the product, so only
            // check that verification still runs
            let _ = verify_product(&swapped, &g);
        }
    }

    #[test]
    fn split_pair_cases() {
        let frame = WeightFrame::standard();
        // plane case: K inside the middle block
        let spec = SimpleFactorSpec::G2Pair {
            alpha: Gq::i(),
            l: frame.l1.clone(),
            k: frame.l2.clone(),
        };
        let g = spec.materialize().unwrap();
        let specs = split_simple_pole_pair(&g).unwrap();
        assert_eq!(specs.len(), 1);
        match &specs[0] {
            SimpleFactorSpec::G2Plane { plane, .. } => {
                assert_eq!(*plane, frame.standard_plane());
            }
            other => panic!("expected a plane factor, got {other:?}"),
        }

        // non-plane case: K leans into conj(L)
        let kv = vec_add(
            &frame.l2.basis().column(0),
            &frame.l1.conj().basis().column(0),
        );
        let spec = SimpleFactorSpec::G2Pair {
            alpha: Gq::i(),
            l: frame.l1.clone(),
            k: Subspace::line(&kv),
        };
        let g = spec.materialize().unwrap();
        let specs = split_simple_pole_pair(&g).unwrap();
        assert_eq!(specs.len(), 2);
        let product = specs[0]
            .materialize()
            .unwrap()
            .mul(&specs[1].materialize().unwrap());
        assert_eq!(product, g);
    }

    #[test]
    fn twisted_roundtrips() {
        let mut rng = rng_from_seed(33);
        let cases = [
            (TwistFlavor::CspUnitary, 4usize),
            (TwistFlavor::SoGrassmannian { k: 2 }, 5),
            (TwistFlavor::SoUnitary, 6),
            (TwistFlavor::G2So4, 7),
        ];
        for (flavor, ambient) in cases {
            let twist = TwistContext::new(flavor);
            let g = random_twisted_loop(flavor, ambient, 2, &mut rng).unwrap();
            let res = factor_twisted(&g, &twist).unwrap_or_else(|e| panic!("{flavor:?}: {e}"));
            assert!(verify_product(&res, &g), "{flavor:?}");
            for entry in &res.factors {
                assert!(entry.is_twisted(&twist).unwrap(), "{flavor:?}: {entry:?}");
            }
        }
    }
}
