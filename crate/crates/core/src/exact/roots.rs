//! Exhaustive rational-root extraction over Q(i).
//!
//! Every denominator in the engine must split into linear factors over Q(i),
//! so the only factorization primitive needed is: given p in Q(i)[x], find
//! all roots in Q(i) with multiplicity, or report that an irreducible factor
//! of degree >= 2 remains. Roots are found by the rational-root theorem over
//! the Euclidean domain Z[i]: clear denominators, then every root u*d0/dd has
//! d0 dividing the trailing and dd dividing the leading coefficient, with u a
//! unit. Divisors are enumerated through the prime factorization of Z[i],
//! which reduces to factoring the integer norm.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::exact::scalar::Gq;

/// A Gaussian integer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gi {
    pub re: BigInt,
    pub im: BigInt,
}

impl Gi {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        Gi { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Gi::new(BigInt::from(re), BigInt::from(im))
    }

    pub fn zero() -> Self {
        Gi::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Gi::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == BigInt::one()
    }

    pub fn conj(&self) -> Self {
        Gi::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, o: &Gi) -> Gi {
        Gi::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn to_gq(&self) -> Gq {
        Gq::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }
}

fn round_ratio(num: &BigInt, den: &BigInt) -> BigInt {
    // Nearest integer to num/den, den > 0.
    let two = BigInt::from(2);
    let (q, r) = num.div_mod_floor(den);
    if &r * &two >= *den {
        q + 1
    } else {
        q
    }
}

/// Euclidean division with norm(remainder) <= norm(b)/2.
fn gi_divrem(a: &Gi, b: &Gi) -> (Gi, Gi) {
    let n = b.norm();
    let prod = a.mul(&b.conj());
    let q = Gi::new(round_ratio(&prod.re, &n), round_ratio(&prod.im, &n));
    let r = Gi::new(
        &a.re - (&q.re * &b.re - &q.im * &b.im),
        &a.im - (&q.re * &b.im + &q.im * &b.re),
    );
    (q, r)
}

pub fn gi_gcd(a: &Gi, b: &Gi) -> Gi {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, r) = gi_divrem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Scale a vector over Q(i) to a primitive Gaussian-integer representative:
/// clear denominators, then divide by the Gaussian-integer content. Spans
/// are unchanged; coefficient growth in downstream products is not.
pub fn primitive_scale(v: &[Gq]) -> Vec<Gq> {
    use num_integer::Integer as _;
    if v.iter().all(|c| c.is_zero()) {
        return v.to_vec();
    }
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.den());
    }
    let ints: Vec<Gi> = v
        .iter()
        .map(|c| {
            let f = &lcm / c.den();
            let (nr, ni) = c.nums();
            Gi::new(nr * &f, ni * &f)
        })
        .collect();
    let mut content = Gi::zero();
    for g in &ints {
        if g.is_zero() {
            continue;
        }
        content = if content.is_zero() {
            g.clone()
        } else {
            gi_gcd(&content, g)
        };
        if content.is_unit() {
            break;
        }
    }
    if content.is_zero() || content.is_unit() {
        return ints.iter().map(|g| g.to_gq()).collect();
    }
    ints.iter()
        .map(|g| {
            let (q, r) = gi_divrem(g, &content);
            debug_assert!(r.is_zero());
            q.to_gq()
        })
        .collect()
}

/// True exact divisibility; returns the quotient when b divides a.
fn gi_div_exact(a: &Gi, b: &Gi) -> Option<Gi> {
    let (q, r) = gi_divrem(a, b);
    if r.is_zero() {
        Some(q)
    } else {
        None
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Deterministic Miller-Rabin for the witnesses valid below 3.3 * 10^24.
fn is_prime(n: &BigInt) -> bool {
    if n <= &BigInt::one() {
        return false;
    }
    let two = BigInt::from(2);
    if n == &two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    let n_minus_1: BigInt = n - 1;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigInt::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor a positive integer by trial division, falling back to a primality
/// test for one large cofactor.
fn int_factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, e: u32, out: &mut Vec<(BigInt, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e2 = 0;
    while n.is_even() {
        n /= 2;
        e2 += 1;
    }
    push(BigInt::from(2), e2, &mut out);
    let mut p = 3u64;
    while BigInt::from(p) * BigInt::from(p) <= n && p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        push(bp, e, &mut out);
        p += 2;
    }
    if n > BigInt::one() {
        if BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT) > n || is_prime(&n) {
            push(n, 1, &mut out);
        } else {
            return Err(Error::FactorizationOverflow);
        }
    }
    Ok(out)
}

/// Square root of -1 modulo a prime p = 1 (mod 4).
fn sqrt_minus_one(p: &BigInt) -> BigInt {
    let exp = (p - 1) / 4;
    let half = (p - 1) / 2;
    let mut a = BigInt::from(2);
    loop {
        // Euler criterion: a is a nonresidue iff a^((p-1)/2) = -1.
        if a.modpow(&half, p) == p - 1 {
            return a.modpow(&exp, p);
        }
        a += 1;
    }
}

/// Gaussian prime factors (up to units) of a nonzero Gaussian integer.
fn gi_factor(a: &Gi) -> Result<Vec<(Gi, u32)>> {
    let mut out: Vec<(Gi, u32)> = Vec::new();
    let mut rem = a.clone();
    let norm = a.norm();
    for (p, _) in int_factor(&norm)? {
        let candidates: Vec<Gi> = if p == BigInt::from(2) {
            vec![Gi::from_ints(1, 1)]
        } else if (&p % BigInt::from(4)) == BigInt::from(3) {
            vec![Gi::new(p.clone(), BigInt::zero())]
        } else {
            let x = sqrt_minus_one(&p);
            let pi = gi_gcd(&Gi::new(p.clone(), BigInt::zero()), &Gi::new(x, BigInt::one()));
            let pi_bar = pi.conj();
            vec![pi, pi_bar]
        };
        for pi in candidates {
            let mut e = 0;
            while let Some(q) = gi_div_exact(&rem, &pi) {
                rem = q;
                e += 1;
            }
            if e > 0 {
                out.push((pi, e));
            }
        }
    }
    debug_assert!(rem.is_unit(), "factorization must leave a unit");
    Ok(out)
}

/// All divisors of `a` up to unit multiples.
fn gi_divisors(a: &Gi) -> Result<Vec<Gi>> {
    let factors = gi_factor(a)?;
    let mut out = vec![Gi::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&p);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    Ok(out)
}

fn units() -> [Gi; 4] {
    [
        Gi::from_ints(1, 0),
        Gi::from_ints(-1, 0),
        Gi::from_ints(0, 1),
        Gi::from_ints(0, -1),
    ]
}

fn denominator_lcm(p: &Poly) -> BigInt {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.den());
    }
    l
}

/// All roots of `p` in Q(i) with multiplicities, sorted canonically.
/// Errors with `NonSplittingDenominator` if the polynomial does not split.
pub fn gaussian_roots(p: &Poly) -> Result<Vec<(Gq, u32)>> {
    if p.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if p.degree() == Some(0) {
        return Ok(vec![]);
    }
    let mut roots: Vec<(Gq, u32)> = Vec::new();
    let mut work = p.clone();

    // Zero roots first.
    let zero = Gq::zero();
    let m0 = work.root_multiplicity(&zero);
    if m0 > 0 {
        roots.push((zero.clone(), m0));
        work = work.div_exact(&Poly::linear(&zero).pow(m0))?;
    }

    if work.degree() == Some(0) {
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        return Ok(roots);
    }

    // Clear denominators so the coefficients live in Z[i].
    let lcm = denominator_lcm(&work);
    let scaled: Vec<Gi> = work
        .coeffs()
        .iter()
        .map(|c| {
            let f = &lcm / c.den();
            let (nr, ni) = c.nums();
            Gi::new(nr * &f, ni * &f)
        })
        .collect();
    let a0 = scaled.first().unwrap().clone();
    let ad = scaled.last().unwrap().clone();
    debug_assert!(!a0.is_zero() && !ad.is_zero());

    // Remove content to keep divisor sets small.
    let mut content = a0.clone();
    for c in &scaled {
        content = gi_gcd(&content, c);
        if content.is_unit() {
            break;
        }
    }
    let a0 = gi_div_exact(&a0, &content).unwrap();
    let ad = gi_div_exact(&ad, &content).unwrap();

    let mut candidates: BTreeSet<Gq> = BTreeSet::new();
    for num in gi_divisors(&a0)? {
        let numq = num.to_gq();
        for den in gi_divisors(&ad)? {
            let denq = den.to_gq().inv().expect("divisor nonzero");
            let base = &numq * &denq;
            for u in units() {
                candidates.insert(&base * &u.to_gq());
            }
        }
    }

    for r in candidates {
        if work.degree() == Some(0) {
            break;
        }
        let m = work.root_multiplicity(&r);
        if m > 0 {
            work = work.div_exact(&Poly::linear(&r).pow(m))?;
            roots.push((r, m));
        }
    }

    if work.degree() != Some(0) {
        return Err(Error::NonSplittingDenominator);
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}
