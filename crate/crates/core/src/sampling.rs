//! Seeded random generators for exact test data: rational rotations,
//! isotropic lines, Lagrangian subspaces, coassociative planes, and loops
//! assembled as products of simple or twisted factors.
//!
//! Everything is integer-seeded and exact-arithmetic friendly: rotations
//! come from rational parametrizations of the circle and Lagrangians from
//! integer symplectic transvections, so no irrational normalization ever
//! appears.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::scalar::Gq;
use crate::linalg::forms::symplectic_j;
use crate::linalg::matrix::{basis_vec, vec_add, vec_conj, vec_scale, Mat, VecC};
use crate::linalg::subspace::Subspace;
use crate::linalg::{antilinear_fixed_line, antilinear_fixed_vector, isotropic_classify, Form};
use crate::loops::{GroupKind, MLoop, TwistContext, TwistFlavor};
use crate::octonion::multiplier_plane;
use crate::simple::{make_twisted_q, SimpleFactorSpec, TwistedQSpec};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

fn rand_nonzero(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let v = rand_int(rng, lo, hi);
        if v != 0 {
            return v;
        }
    }
}

/// A pole parameter off the real axis.
pub fn random_alpha(rng: &mut ChaCha8Rng) -> Gq {
    Gq::from_ints(rand_int(rng, -2, 2), rand_nonzero(rng, -2, 2))
}

/// A pole parameter off both axes.
pub fn random_alpha_off_axes(rng: &mut ChaCha8Rng) -> Gq {
    Gq::from_ints(rand_nonzero(rng, -2, 2), rand_nonzero(rng, -2, 2))
}

pub fn random_imaginary_alpha(rng: &mut ChaCha8Rng) -> Gq {
    Gq::from_ints(0, rand_nonzero(rng, -2, 2))
}

/// Exact rotation in the (i, j) coordinate plane from the rational circle
/// parametrization ((1-t^2)/(1+t^2), 2t/(1+t^2)).
fn givens(n: usize, i: usize, j: usize, t_num: i64, t_den: i64) -> Mat {
    let t = Gq::ratio(t_num, t_den);
    let one = Gq::one();
    let denom = (&one + &(&t * &t)).inv().expect("1 + t^2 nonzero");
    let c = &(&one - &(&t * &t)) * &denom;
    let s = &(&t + &t) * &denom;
    let mut m = Mat::identity(n);
    m[(i, i)] = c.clone();
    m[(j, j)] = c;
    m[(i, j)] = -&s;
    m[(j, i)] = s;
    m
}

/// Product of random plane rotations; exactly orthogonal with determinant 1.
pub fn random_rotation(n: usize, rng: &mut ChaCha8Rng, steps: usize) -> Mat {
    let mut m = Mat::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rand_int(rng, 0, n as i64 - 1) as usize;
        let mut j = rand_int(rng, 0, n as i64 - 1) as usize;
        while j == i {
            j = rand_int(rng, 0, n as i64 - 1) as usize;
        }
        let t_num = rand_nonzero(rng, -1, 1);
        let t_den = rand_int(rng, 1, 2);
        m = &givens(n, i, j, t_num, t_den) * &m;
    }
    m
}

/// A rotation acting only inside the coordinate block [lo, hi).
fn random_block_rotation(n: usize, lo: usize, hi: usize, rng: &mut ChaCha8Rng) -> Mat {
    let width = hi - lo;
    if width < 2 {
        return Mat::identity(n);
    }
    let mut m = Mat::identity(n);
    for _ in 0..2 {
        let i = lo + rand_int(rng, 0, width as i64 - 1) as usize;
        let mut j = lo + rand_int(rng, 0, width as i64 - 1) as usize;
        while j == i {
            j = lo + rand_int(rng, 0, width as i64 - 1) as usize;
        }
        m = &givens(n, i, j, rand_nonzero(rng, -1, 1), rand_int(rng, 1, 2)) * &m;
    }
    m
}

/// An isotropic line span(x + i y) with x, y an exactly orthonormal pair,
/// obtained by rotating (e1, e2).
pub fn random_isotropic_line(n: usize, rng: &mut ChaCha8Rng) -> Subspace {
    assert!(n >= 2);
    let r = random_rotation(n, rng, 3);
    let x = r.apply(&basis_vec(n, 0));
    let y = r.apply(&basis_vec(n, 1));
    let v = vec_add(&x, &vec_scale(&y, &Gq::i()));
    Subspace::line(&v)
}

/// Symplectic transvection x -> x + omega(x, v) v for an integer vector v.
fn transvection(v: &VecC) -> Mat {
    let dim = v.len();
    let j = symplectic_j(dim);
    let jv = j.apply(v);
    let mut m = Mat::identity(dim);
    for r in 0..dim {
        for c in 0..dim {
            let t = &m[(r, c)] + &(&v[r] * &jv[c]);
            m[(r, c)] = t;
        }
    }
    m
}

fn random_int_vector(dim: usize, rng: &mut ChaCha8Rng) -> VecC {
    loop {
        let v: VecC = (0..dim)
            .map(|_| Gq::from_int(rand_int(rng, -1, 1)))
            .collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// A Lagrangian subspace: integer symplectic transvections applied to the
/// standard one. `real` keeps the subspace conjugation-invariant.
pub fn random_lagrangian(rank: usize, real: bool, rng: &mut ChaCha8Rng) -> Subspace {
    let dim = 2 * rank;
    let mut t = Mat::identity(dim);
    for _ in 0..2 {
        let mut v = random_int_vector(dim, rng);
        if !real {
            // mix in an imaginary direction while keeping entries integral
            let w = random_int_vector(dim, rng);
            v = vec_add(&v, &vec_scale(&w, &Gq::i()));
        }
        t = &transvection(&v) * &t;
    }
    let w0: Vec<VecC> = (0..rank).map(|i| basis_vec(dim, i)).collect();
    let w = Subspace::from_vectors(dim, &w0).image_under(&t);
    debug_assert!(isotropic_classify(&w, &Form::symplectic(dim))
        .map(|r| r.lagrangian)
        .unwrap_or(false));
    debug_assert!(!real || w.is_real());
    w
}

/// A random subspace of the given dimension from small integer data.
pub fn random_subspace(ambient: usize, dim: usize, rng: &mut ChaCha8Rng) -> Subspace {
    loop {
        let vs: Vec<VecC> = (0..dim)
            .map(|_| {
                let re = random_int_vector(ambient, rng);
                let im = random_int_vector(ambient, rng);
                vec_add(&re, &vec_scale(&im, &Gq::i()))
            })
            .collect();
        let s = Subspace::from_vectors(ambient, &vs);
        if s.dim() == dim {
            return s;
        }
    }
}

/// A random line inside a given subspace, with small Gaussian coefficients.
fn random_line_in(space: &Subspace, rng: &mut ChaCha8Rng) -> Subspace {
    let basis = space.basis_vectors();
    loop {
        let mut v = vec![Gq::zero(); space.ambient()];
        for b in &basis {
            let c = Gq::from_ints(rand_int(rng, -1, 1), rand_int(rng, -1, 1));
            v = vec_add(&v, &vec_scale(b, &c));
        }
        if v.iter().any(|c| !c.is_zero()) {
            return Subspace::line(&v);
        }
    }
}

/// A complex coassociative plane: an isotropic line plus a line in its
/// multiplier plane.
pub fn random_coassoc_plane(rng: &mut ChaCha8Rng) -> Result<Subspace> {
    let l = random_isotropic_line(7, rng);
    let b = multiplier_plane(&l)?;
    let m = random_line_in(&b, rng);
    Ok(l.sum(&m))
}

/// A pair of lines satisfying the simple-pole-pair conditions; with
/// probability about a half the second line leaves the plane case.
pub fn random_g2_pair(rng: &mut ChaCha8Rng) -> Result<(Subspace, Subspace)> {
    let l = random_isotropic_line(7, rng);
    let b = multiplier_plane(&l)?;
    let m = random_line_in(&b, rng);
    let t = Gq::from_ints(rand_int(rng, -1, 1), rand_int(rng, -1, 1));
    let k_vec = vec_add(
        &m.basis().column(0),
        &vec_scale(&vec_conj(&l.basis().column(0)), &t),
    );
    Ok((l, Subspace::line(&k_vec)))
}

/// A random simple factor for the group at a fixed pole parameter.
pub fn random_spec_at(kind: GroupKind, alpha: &Gq, rng: &mut ChaCha8Rng) -> Result<SimpleFactorSpec> {
    Ok(match kind {
        GroupKind::UnitaryGl(n) => SimpleFactorSpec::Gl {
            alpha: alpha.clone(),
            w: random_subspace(n, 1 + (rand_int(rng, 0, n as i64 - 1) as usize), rng),
        },
        GroupKind::OrthogonalSo(n) => SimpleFactorSpec::So {
            alpha: alpha.clone(),
            line: random_isotropic_line(n, rng),
        },
        GroupKind::ConformalSymplectic(rank) => SimpleFactorSpec::Csp {
            alpha: alpha.clone(),
            w: random_lagrangian(rank, false, rng),
        },
        GroupKind::G2Fund => {
            if rng.gen_bool(0.5) {
                SimpleFactorSpec::G2Plane {
                    alpha: alpha.clone(),
                    plane: random_coassoc_plane(rng)?,
                }
            } else {
                let (l, k) = random_g2_pair(rng)?;
                SimpleFactorSpec::G2Pair {
                    alpha: alpha.clone(),
                    l,
                    k,
                }
            }
        }
    })
}

pub fn random_spec(kind: GroupKind, rng: &mut ChaCha8Rng) -> Result<SimpleFactorSpec> {
    let alpha = random_alpha(rng);
    random_spec_at(kind, &alpha, rng)
}

/// A loop as a product of random simple factors at no more than
/// `max_pole_pairs` distinct pole-pair locations.
pub fn random_loop(
    kind: GroupKind,
    factors: usize,
    max_pole_pairs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(MLoop, Vec<SimpleFactorSpec>)> {
    let mut alphas: Vec<Gq> = Vec::new();
    while alphas.len() < max_pole_pairs.max(1) {
        let a = random_alpha(rng);
        if !alphas.contains(&a) && !alphas.contains(&a.conj()) {
            alphas.push(a);
        }
    }
    let mut specs = Vec::with_capacity(factors);
    let mut product = MLoop::identity(kind.ambient());
    for _ in 0..factors {
        let alpha = alphas[rand_int(rng, 0, alphas.len() as i64 - 1) as usize].clone();
        let spec = random_spec_at(kind, &alpha, rng)?;
        product = product.mul(&spec.materialize()?);
        specs.push(spec);
    }
    Ok((product, specs))
}

/// A twist-compatible factor at a purely imaginary pole, when the flavor
/// admits one. The even-orthogonal unitary flavor has none.
pub fn random_axis_spec(
    flavor: TwistFlavor,
    ambient: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<SimpleFactorSpec>> {
    let alpha = random_imaginary_alpha(rng);
    Ok(match flavor {
        TwistFlavor::SoGrassmannian { k } => {
            // x in the first block, y in the second, equal unit lengths
            let rx = random_block_rotation(ambient, 0, k, rng);
            let ry = random_block_rotation(ambient, k, ambient, rng);
            let x = rx.apply(&basis_vec(ambient, 0));
            let y = ry.apply(&basis_vec(ambient, k));
            let v = vec_add(&x, &vec_scale(&y, &Gq::i()));
            Some(SimpleFactorSpec::So {
                alpha,
                line: Subspace::line(&v),
            })
        }
        TwistFlavor::SoUnitary => None,
        TwistFlavor::CspUnitary => Some(SimpleFactorSpec::Csp {
            alpha,
            w: random_lagrangian(ambient / 2, true, rng),
        }),
        TwistFlavor::G2So4 => {
            // sM = conj M: real part in the last three coordinates,
            // imaginary part in the first four.
            let rx = random_block_rotation(7, 4, 7, rng);
            let ry = random_block_rotation(7, 0, 4, rng);
            let x = rx.apply(&basis_vec(7, 4));
            let y = ry.apply(&basis_vec(7, 0));
            let m_vec = vec_add(&x, &vec_scale(&y, &Gq::i()));
            let m = Subspace::line(&m_vec);
            let twist = TwistContext::new(TwistFlavor::G2So4);
            let s = twist.s_matrix(7);
            let b = multiplier_plane(&m)?;
            let n_fixed = antilinear_fixed_line(&b, &s)?;
            // A pointwise-fixed representative keeps the perturbed line
            // invariant; the canonical basis vector is fixed only up to
            // phase.
            let n0 = antilinear_fixed_vector(&n_fixed, &s)?;
            let t = Gq::from_int(rand_int(rng, -1, 1));
            let n_vec = vec_add(&n0, &vec_scale(&vec_conj(&m_vec), &t));
            Some(SimpleFactorSpec::G2Pair {
                alpha,
                l: m,
                k: Subspace::line(&n_vec),
            })
        }
    })
}

/// The group kind a twist flavor acts on, given the ambient dimension.
pub fn flavor_group(flavor: TwistFlavor, ambient: usize) -> GroupKind {
    match flavor {
        TwistFlavor::SoGrassmannian { .. } | TwistFlavor::SoUnitary => {
            GroupKind::OrthogonalSo(ambient)
        }
        TwistFlavor::CspUnitary => GroupKind::ConformalSymplectic(ambient / 2),
        TwistFlavor::G2So4 => GroupKind::G2Fund,
    }
}

/// A twisted loop assembled from q-elements and axis factors.
pub fn random_twisted_loop(
    flavor: TwistFlavor,
    ambient: usize,
    factors: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MLoop> {
    let kind = flavor_group(flavor, ambient);
    let twist = TwistContext::new(flavor);
    let mut product = MLoop::identity(ambient);
    for _ in 0..factors {
        let use_axis = !matches!(flavor, TwistFlavor::SoUnitary) && rng.gen_bool(0.4);
        if use_axis {
            if let Some(spec) = random_axis_spec(flavor, ambient, rng)? {
                product = product.mul(&spec.materialize()?);
                continue;
            }
        }
        let alpha = random_alpha_off_axes(rng);
        let base = random_spec_at(kind, &alpha, rng)?;
        let q = TwistedQSpec { base, twist };
        let (q_loop, _) = make_twisted_q(&q)?;
        product = product.mul(&q_loop);
    }
    Ok(product)
}
