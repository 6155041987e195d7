//! Matrix loops: square matrices of rational functions with group-membership
//! tests, reality/twisting checks, Laurent expansion at a pole, and the
//! total-degree order that drives every factorization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::exact::ratfun::{MoebiusChart, Rf};
use crate::exact::roots::gaussian_roots;
use crate::exact::scalar::Gq;
use crate::linalg::matrix::{basis_vec, Mat};
use crate::linalg::symplectic_j;
use crate::octonion;

/// Which rational loop group a loop is tested against. The conformal
/// symplectic family stores its rank; the ambient matrix size is 2*rank.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupKind {
    /// Invertible loops with the unitary reality condition.
    UnitaryGl(usize),
    /// Special orthogonal loops; reality is coefficientwise conjugation.
    OrthogonalSo(usize),
    /// Conformal symplectic loops; `rank` is half the ambient dimension.
    ConformalSymplectic(usize),
    /// The exceptional group acting on imaginary complexified octonions.
    G2Fund,
}

impl GroupKind {
    pub fn ambient(&self) -> usize {
        match self {
            GroupKind::UnitaryGl(n) | GroupKind::OrthogonalSo(n) => *n,
            GroupKind::ConformalSymplectic(rank) => 2 * rank,
            GroupKind::G2Fund => 7,
        }
    }

    /// Reality is coefficientwise conjugation exactly for the orthogonal
    /// and exceptional families.
    pub fn reality_is_coefficientwise(&self) -> bool {
        matches!(self, GroupKind::OrthogonalSo(_) | GroupKind::G2Fund)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::UnitaryGl(_) => "gl",
            GroupKind::OrthogonalSo(_) => "so",
            GroupKind::ConformalSymplectic(_) => "csp",
            GroupKind::G2Fund => "g2",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GroupContext {
    pub kind: GroupKind,
}

impl GroupContext {
    pub fn new(kind: GroupKind) -> Self {
        GroupContext { kind }
    }

    pub fn ambient(&self) -> usize {
        self.kind.ambient()
    }
}

/// The symmetric-space flavors supported by the twisted generators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TwistFlavor {
    /// diag(I_k, -I_{n-k}) conjugation on the orthogonal family.
    SoGrassmannian { k: usize },
    /// (0 I; -I 0) conjugation on the even orthogonal family.
    SoUnitary,
    /// diag(-I_4, I_3) on the exceptional family.
    G2So4,
    /// J-conjugation divided by the symplectic multiplier.
    CspUnitary,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TwistContext {
    pub flavor: TwistFlavor,
}

impl TwistContext {
    pub fn new(flavor: TwistFlavor) -> Self {
        TwistContext { flavor }
    }

    /// The matrix implementing the holomorphic involution by conjugation.
    pub fn s_matrix(&self, ambient: usize) -> Mat {
        match self.flavor {
            TwistFlavor::SoGrassmannian { k } => Mat::from_fn(ambient, ambient, |r, c| {
                if r != c {
                    Gq::zero()
                } else if r < k {
                    Gq::one()
                } else {
                    -Gq::one()
                }
            }),
            TwistFlavor::SoUnitary | TwistFlavor::CspUnitary => symplectic_j(ambient),
            TwistFlavor::G2So4 => {
                assert_eq!(ambient, 7);
                Mat::from_fn(7, 7, |r, c| {
                    if r != c {
                        Gq::zero()
                    } else if r < 4 {
                        -Gq::one()
                    } else {
                        Gq::one()
                    }
                })
            }
        }
    }
}

/// An n x n matrix of rational functions.
#[derive(Clone, PartialEq, Eq)]
pub struct MLoop {
    n: usize,
    entries: Vec<Rf>,
}

impl MLoop {
    pub fn identity(n: usize) -> MLoop {
        MLoop::from_fn(n, |r, c| {
            if r == c {
                Rf::one()
            } else {
                Rf::zero()
            }
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rf) -> MLoop {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        MLoop { n, entries }
    }

    /// Loop from a constant matrix.
    pub fn constant(m: &Mat) -> MLoop {
        assert_eq!(m.rows(), m.cols());
        MLoop::from_fn(m.rows(), |r, c| Rf::constant(m[(r, c)].clone()))
    }

    /// Sum of scalar-function multiples of constant matrices.
    pub fn projection_sum(n: usize, terms: &[(Rf, Mat)]) -> MLoop {
        MLoop::from_fn(n, |r, c| {
            let mut acc = Rf::zero();
            for (f, m) in terms {
                if !m[(r, c)].is_zero() {
                    acc = &acc + &(f * &Rf::constant(m[(r, c)].clone()));
                }
            }
            acc
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rf {
        &self.entries[r * self.n + c]
    }

    pub fn entries(&self) -> &[Rf] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                if r == c {
                    self.entry(r, c).is_one()
                } else {
                    self.entry(r, c).is_zero()
                }
            })
        })
    }

    pub fn mul(&self, rhs: &MLoop) -> MLoop {
        assert_eq!(self.n, rhs.n);
        MLoop::from_fn(self.n, |r, c| {
            let mut acc = Rf::zero();
            for k in 0..self.n {
                let a = self.entry(r, k);
                let b = rhs.entry(k, c);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> MLoop {
        MLoop::from_fn(self.n, |r, c| self.entry(c, r).clone())
    }

    pub fn conj_coeff(&self) -> MLoop {
        MLoop::from_fn(self.n, |r, c| self.entry(r, c).conj_coeff())
    }

    pub fn subst_neg(&self) -> MLoop {
        MLoop::from_fn(self.n, |r, c| self.entry(r, c).subst_neg())
    }

    /// Conjugate-transpose with the loop parameter reflected: the unique
    /// loop whose value at lambda is the adjoint of the value at conj(lambda).
    pub fn reality_adjoint(&self) -> MLoop {
        self.conj_coeff().transpose()
    }

    pub fn value_at(&self, x: &Gq) -> Result<Mat> {
        let mut m = Mat::zero(self.n, self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m[(r, c)] = self.entry(r, c).eval(x)?;
            }
        }
        Ok(m)
    }

    pub fn value_at_infinity(&self) -> Result<Mat> {
        let mut m = Mat::zero(self.n, self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m[(r, c)] = self.entry(r, c).eval_infinity()?;
            }
        }
        Ok(m)
    }

    /// Clear denominators: the polynomial matrix P and the factored common
    /// denominator d with self = P / d.
    fn clear_denominators(&self) -> (Vec<Poly>, Vec<(Gq, u32)>) {
        let mut common: Vec<(Gq, u32)> = Vec::new();
        for e in &self.entries {
            for (root, mult) in e.denom_factors() {
                match common.iter_mut().find(|(r, _)| r == root) {
                    Some(entry) => entry.1 = entry.1.max(*mult),
                    None => common.push((root.clone(), *mult)),
                }
            }
        }
        common.sort_by(|a, b| a.0.cmp(&b.0));
        let polys: Vec<Poly> = self
            .entries
            .iter()
            .map(|e| {
                let mut p = e.numer().scale(e.scale());
                for (root, mult) in &common {
                    let have = e.pole_order(root);
                    if *mult > have {
                        p = &p * &Poly::linear(root).pow(mult - have);
                    }
                }
                p
            })
            .collect();
        (polys, common)
    }

    /// Determinant as a rational function.
    pub fn det(&self) -> Rf {
        let (polys, common) = self.clear_denominators();
        let det_p = poly_mat_det(self.n, &polys);
        let denom: Vec<(Gq, u32)> = common
            .iter()
            .map(|(r, m)| (r.clone(), m * self.n as u32))
            .collect();
        Rf::from_parts(Gq::one(), det_p, denom)
    }

    /// Exact inverse through the adjugate of the cleared polynomial matrix.
    /// The determinant numerator must split over Q(i).
    pub fn inv(&self) -> Result<MLoop> {
        let (polys, common) = self.clear_denominators();
        let (det_p, adj) = poly_mat_det_adjugate(self.n, &polys);
        if det_p.is_zero() {
            return Err(Error::SingularLoop);
        }
        let det_roots = gaussian_roots(&det_p)?;
        let lead_inv = det_p.leading().inv()?;
        let mut d_expanded = Poly::one();
        for (root, mult) in &common {
            d_expanded = &d_expanded * &Poly::linear(root).pow(*mult);
        }
        Ok(MLoop::from_fn(self.n, |r, c| {
            let numer = &adj[r * self.n + c] * &d_expanded;
            Rf::from_parts(lead_inv.clone(), numer, det_roots.clone())
        }))
    }
}

impl std::fmt::Debug for MLoop {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MLoop {}x{} [", self.n, self.n)?;
        for r in 0..self.n {
            for c in 0..self.n {
                if !self.entry(r, c).is_zero() {
                    writeln!(f, "  ({r},{c}): {}", self.entry(r, c))?;
                }
            }
        }
        write!(f, "]")
    }
}

fn poly_mat_mul(n: usize, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n * n];
    for r in 0..n {
        for k in 0..n {
            if a[r * n + k].is_zero() {
                continue;
            }
            for c in 0..n {
                if b[k * n + c].is_zero() {
                    continue;
                }
                let t = &out[r * n + c] + &(&a[r * n + k] * &b[k * n + c]);
                out[r * n + c] = t;
            }
        }
    }
    out
}

fn poly_mat_trace(n: usize, a: &[Poly]) -> Poly {
    let mut t = Poly::zero();
    for i in 0..n {
        t = &t + &a[i * n + i];
    }
    t
}

/// Division-free determinant and adjugate of a polynomial matrix
/// (Faddeev-LeVerrier; the only divisions are by integers).
fn poly_mat_det_adjugate(n: usize, p: &[Poly]) -> (Poly, Vec<Poly>) {
    assert_eq!(p.len(), n * n);
    // M_1 = I; M_{k+1} = P M_k + c_k I with c_k = -tr(P M_k)/k.
    // Then det P = (-1)^n c_n and adj P = (-1)^(n-1) M_n.
    let mut mk: Vec<Poly> = (0..n * n)
        .map(|idx| {
            if idx / n == idx % n {
                Poly::one()
            } else {
                Poly::zero()
            }
        })
        .collect();
    let mut ck = Poly::zero();
    for k in 1..=n {
        let pm = poly_mat_mul(n, p, &mk);
        ck = poly_mat_trace(n, &pm).scale(&(-Gq::ratio(1, k as i64)));
        if k == n {
            break;
        }
        mk = pm;
        for i in 0..n {
            mk[i * n + i] = &mk[i * n + i] + &ck;
        }
    }
    let det_sign = if n % 2 == 0 { 1 } else { -1 };
    let adj_sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    let det = ck.scale(&Gq::from_int(det_sign));
    let adj: Vec<Poly> = mk
        .iter()
        .map(|q| q.scale(&Gq::from_int(adj_sign)))
        .collect();
    (det, adj)
}

fn poly_mat_det(n: usize, p: &[Poly]) -> Poly {
    poly_mat_det_adjugate(n, p).0
}

/// The lexicographic induction measure: pole order first, then the rank of
/// the lowest Laurent coefficient.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct TotalDegree {
    pub k: u32,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct LaurentExpansion {
    pub chart: MoebiusChart,
    pub lo: i64,
    pub coeffs: Vec<Mat>,
}

impl LaurentExpansion {
    pub fn coeff(&self, j: i64) -> &Mat {
        let idx = j - self.lo;
        assert!(idx >= 0 && (idx as usize) < self.coeffs.len());
        &self.coeffs[idx as usize]
    }
}

/// Laurent data of the loop in the chart at alpha, with coefficients for
/// j in [-k, -k + depth]. Also returns the total degree (k, rank g_{-k}).
pub fn laurent_at(g: &MLoop, alpha: &Gq, depth: u32) -> Result<(LaurentExpansion, TotalDegree)> {
    let chart = MoebiusChart::new(alpha.clone())?;
    let k = g
        .entries()
        .iter()
        .map(|e| e.pole_order(alpha))
        .max()
        .unwrap_or(0);
    let lo = -(k as i64);
    let hi = lo + depth as i64;
    let n = g.n();
    let mut coeffs: Vec<Mat> = vec![Mat::zero(n, n); (hi - lo + 1) as usize];
    for r in 0..n {
        for c in 0..n {
            let series = g.entry(r, c).laurent(&chart, lo, hi);
            for (idx, v) in series.into_iter().enumerate() {
                coeffs[idx][(r, c)] = v;
            }
        }
    }
    let rank = coeffs[0].rank();
    Ok((
        LaurentExpansion { chart, lo, coeffs },
        TotalDegree { k, rank },
    ))
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub member: bool,
    /// The conformal multiplier c with t(g) J g = c J, when applicable.
    pub multiplier: Option<Rf>,
    pub detail: String,
}

impl MembershipReport {
    fn ok() -> Self {
        MembershipReport {
            member: true,
            multiplier: None,
            detail: String::new(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        MembershipReport {
            member: false,
            multiplier: None,
            detail: detail.into(),
        }
    }
}

/// Degree bound for cross-multiplied quadratic identities in the entries:
/// twice (max numerator degree + common denominator degree). An identity of
/// rational functions bounded by this degree holds iff it holds at
/// bound + 1 distinct non-pole points, which keeps the check exact while
/// avoiding arithmetic on large products.
fn quadratic_identity_bound(g: &MLoop) -> usize {
    let mut numer_deg = 0usize;
    let mut common: Vec<(Gq, u32)> = Vec::new();
    for e in g.entries() {
        if let Some(d) = e.numer().degree() {
            numer_deg = numer_deg.max(d);
        }
        for (root, mult) in e.denom_factors() {
            match common.iter_mut().find(|(r, _)| r == root) {
                Some(entry) => entry.1 = entry.1.max(*mult),
                None => common.push((root.clone(), *mult)),
            }
        }
    }
    let denom_deg: u32 = common.iter().map(|(_, m)| m).sum();
    2 * (numer_deg + denom_deg as usize)
}

/// Distinct rational points avoiding every pole of the loop.
fn sample_points(g: &MLoop, count: usize) -> Vec<Gq> {
    let mut out = Vec::with_capacity(count);
    let mut t: i64 = 0;
    while out.len() < count {
        let x = Gq::from_int(t);
        if g.entries().iter().all(|e| e.pole_order(&x) == 0) {
            out.push(x);
        }
        t = if t >= 0 { -(t + 1) } else { -t };
    }
    out
}

/// Membership test for the given group. Quadratic identities in the entries
/// are verified exactly by evaluation at more points than their degree
/// bound; the conformal multiplier is extracted as a rational function.
pub fn membership(g: &MLoop, ctx: &GroupContext) -> MembershipReport {
    if g.n() != ctx.ambient() {
        return MembershipReport::fail(format!(
            "ambient dimension {} does not match the group's {}",
            g.n(),
            ctx.ambient()
        ));
    }
    let bound = quadratic_identity_bound(g);
    let points = sample_points(g, bound + 1);
    match ctx.kind {
        GroupKind::UnitaryGl(_) => {
            // det is nonzero iff it is nonzero at more points than its
            // possible zero count.
            for x in &points {
                let m = g.value_at(x).expect("non-pole");
                if !m.det().is_zero() {
                    return MembershipReport::ok();
                }
            }
            MembershipReport::fail("determinant vanishes identically")
        }
        GroupKind::OrthogonalSo(_) | GroupKind::G2Fund => {
            let check_auto = ctx.kind == GroupKind::G2Fund;
            for x in &points {
                let m = g.value_at(x).expect("non-pole");
                if !(&m.transpose() * &m).is_identity() {
                    return MembershipReport::fail(format!(
                        "t(g) g is not the identity (checked at {x})"
                    ));
                }
                if check_auto {
                    let cols = m.columns();
                    for i in 0..7 {
                        for j in (i + 1)..7 {
                            let prod = octonion::mul_im7(&basis_vec(7, i), &basis_vec(7, j));
                            if m.apply(&prod) != octonion::mul_im7(&cols[i], &cols[j]) {
                                return MembershipReport::fail(format!(
                                    "automorphism law fails on basis pair ({}, {}) at {x}",
                                    i + 1,
                                    j + 1
                                ));
                            }
                        }
                    }
                }
            }
            // Orthogonality forces det^2 = 1, so det is constant.
            let d = g.value_at(&points[0]).expect("non-pole").det();
            if !d.is_one() {
                return MembershipReport::fail("determinant is -1, not 1");
            }
            MembershipReport::ok()
        }
        GroupKind::ConformalSymplectic(rank) => {
            let dim = 2 * rank;
            let j = symplectic_j(dim);
            // the multiplier from one entry of t(g) J g; J_{0, rank} = 1
            let mut c = Rf::zero();
            for k in 0..dim {
                let jg: Rf = {
                    let mut acc = Rf::zero();
                    for l in 0..dim {
                        if !j[(k, l)].is_zero() {
                            acc = &acc + &(g.entry(l, rank) * &Rf::constant(j[(k, l)].clone()));
                        }
                    }
                    acc
                };
                if !jg.is_zero() && !g.entry(k, 0).is_zero() {
                    c = &c + &(g.entry(k, 0) * &jg);
                }
            }
            if c.is_zero() {
                return MembershipReport::fail("symplectic gram is degenerate");
            }
            for x in &points {
                let m = g.value_at(x).expect("non-pole");
                let gram = &(&m.transpose() * &j) * &m;
                let cx = c.eval(x).expect("non-pole of entries");
                let expected = j.scale(&cx);
                if gram != expected {
                    return MembershipReport::fail(format!(
                        "t(g) J g is not a multiple of J at {x}"
                    ));
                }
            }
            MembershipReport {
                member: true,
                multiplier: Some(c),
                detail: String::new(),
            }
        }
    }
}

/// Imaginary-octonion product of two vectors of rational functions.
pub fn rf_mul_im7(x: &[Rf], y: &[Rf]) -> Vec<Rf> {
    let table = octonion::im_table();
    let mut out = vec![Rf::zero(); 7];
    for i in 0..7 {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..7 {
            if y[j].is_zero() {
                continue;
            }
            let (sign, idx) = table[i][j];
            if idx == 0 {
                continue;
            }
            let term = &x[i] * &y[j];
            let slot = &mut out[idx as usize - 1];
            *slot = if sign > 0 { &*slot + &term } else { &*slot - &term };
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymmetryReport {
    pub normalized: bool,
    pub real: bool,
    /// None when no twist context was supplied.
    pub twisted: Option<bool>,
}

/// Normalization at infinity, the reality condition for the group's
/// conjugation rule, and optionally the twisting condition.
pub fn symmetry_check(g: &MLoop, ctx: &GroupContext, twist: Option<&TwistContext>) -> SymmetryReport {
    let normalized = match g.value_at_infinity() {
        Ok(m) => m.is_identity(),
        Err(_) => false,
    };
    let real = if ctx.kind.reality_is_coefficientwise() {
        g.conj_coeff() == *g
    } else {
        // adjoint-inverse reality, verified exactly by evaluation past the
        // degree bound of the quadratic identity
        let h = g.reality_adjoint();
        let bound = quadratic_identity_bound(g);
        let points = sample_points_pair(g, &h, bound + 1);
        points.iter().all(|x| {
            let a = h.value_at(x).expect("non-pole");
            let b = g.value_at(x).expect("non-pole");
            (&a * &b).is_identity()
        })
    };
    let twisted = twist.map(|tw| check_twisted(g, ctx, tw));
    SymmetryReport {
        normalized,
        real,
        twisted,
    }
}

/// Distinct rational points avoiding the poles of both loops.
fn sample_points_pair(g: &MLoop, h: &MLoop, count: usize) -> Vec<Gq> {
    let mut out = Vec::with_capacity(count);
    let mut t: i64 = 0;
    while out.len() < count {
        let x = Gq::from_int(t);
        if g.entries().iter().all(|e| e.pole_order(&x) == 0)
            && h.entries().iter().all(|e| e.pole_order(&x) == 0)
        {
            out.push(x);
        }
        t = if t >= 0 { -(t + 1) } else { -t };
    }
    out
}

fn check_twisted(g: &MLoop, ctx: &GroupContext, twist: &TwistContext) -> bool {
    let n = g.n();
    let s = twist.s_matrix(n);
    match twist.flavor {
        TwistFlavor::SoGrassmannian { .. } | TwistFlavor::SoUnitary | TwistFlavor::G2So4 => {
            let s_inv = s.inverse().expect("involution matrix invertible");
            let lhs = MLoop::constant(&s)
                .mul(&g.subst_neg())
                .mul(&MLoop::constant(&s_inv));
            lhs == *g
        }
        TwistFlavor::CspUnitary => {
            let report = membership(g, ctx);
            let Some(c) = report.multiplier else {
                return false;
            };
            let c_neg = c.subst_neg();
            let Ok(c_neg_inv) = c_neg.inv() else {
                return false;
            };
            let j = s; // J matrix
            let j_inv = j.inverse().expect("J invertible");
            let sandwich = MLoop::constant(&j)
                .mul(&g.subst_neg())
                .mul(&MLoop::constant(&j_inv));
            let lhs = MLoop::from_fn(n, |r, col| &c_neg_inv * sandwich.entry(r, col));
            lhs == *g
        }
    }
}

/// All pole locations of the loop with their total degrees, upper-half-plane
/// representatives first within the canonical order. Real poles are invalid
/// for any loop satisfying a reality condition.
pub fn pole_spectrum(g: &MLoop) -> Result<Vec<(Gq, TotalDegree)>> {
    let mut roots: Vec<Gq> = Vec::new();
    for e in g.entries() {
        for (root, _) in e.denom_factors() {
            if root.is_real() {
                return Err(Error::InvalidRealPole(root.to_string()));
            }
            if !roots.contains(root) {
                roots.push(root.clone());
            }
        }
    }
    // upper half-plane representative of the conjugate pair
    let rep = |x: &Gq| -> Gq {
        if x.im_positive() {
            x.clone()
        } else {
            x.conj()
        }
    };
    roots.sort_by(|a, b| {
        rep(a)
            .cmp(&rep(b))
            .then_with(|| b.im().cmp(&a.im()))
    });
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let (_, deg) = laurent_at(g, &root, 0)?;
        debug_assert!(deg.k >= 1);
        out.push((root, deg));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(re: i64, im: i64) -> MoebiusChart {
        MoebiusChart::new(Gq::from_ints(re, im)).unwrap()
    }

    #[test]
    fn identity_laurent() {
        let id = MLoop::identity(3);
        let (exp, deg) = laurent_at(&id, &Gq::i(), 2).unwrap();
        assert_eq!(deg, TotalDegree { k: 0, rank: 3 });
        assert!(exp.coeff(0).is_identity());
        assert!(exp.coeff(1).is_zero());
    }

    #[test]
    fn mul_inv_roundtrip() {
        let ch = chart(0, 1);
        let mu = Rf::mu(&ch);
        // diag(mu, 1) style loop with an off-diagonal coupling
        let g = MLoop::from_fn(2, |r, c| match (r, c) {
            (0, 0) => mu.clone(),
            (1, 1) => Rf::one(),
            (0, 1) => &Rf::one() - &mu,
            _ => Rf::zero(),
        });
        let inv = g.inv().unwrap();
        assert!(g.mul(&inv).is_identity());
        assert!(inv.mul(&g).is_identity());
        assert!(MLoop::identity(2).mul(&g) == g);
        let det = g.det();
        assert_eq!(det, mu);
    }

    #[test]
    fn singular_loop_detected() {
        let g = MLoop::from_fn(2, |_, _| Rf::one());
        assert_eq!(g.inv(), Err(Error::SingularLoop));
    }

    #[test]
    fn spectrum_and_real_pole() {
        let ch = chart(1, 1);
        let g = MLoop::from_fn(2, |r, c| match (r, c) {
            (0, 0) => Rf::mu(&ch),
            (1, 1) => Rf::one(),
            _ => Rf::zero(),
        });
        let spec = pole_spectrum(&g).unwrap();
        assert_eq!(spec.len(), 1);
        assert_eq!(spec[0].0, Gq::from_ints(1, -1));
        assert_eq!(spec[0].1, TotalDegree { k: 1, rank: 1 });
        assert!(pole_spectrum(&MLoop::identity(2)).unwrap().is_empty());

        let bad = MLoop::from_fn(1, |_, _| {
            Rf::normalize(&Poly::one(), &Poly::linear(&Gq::from_int(3))).unwrap()
        });
        assert!(matches!(
            pole_spectrum(&bad),
            Err(Error::InvalidRealPole(_))
        ));
    }
}
