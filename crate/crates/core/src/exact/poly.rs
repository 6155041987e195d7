//! Dense univariate polynomials over Q(i), ascending coefficient order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::scalar::Gq;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    /// Ascending degree; trimmed so the last entry is nonzero (empty = zero).
    coeffs: Vec<Gq>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Gq>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Gq::one())
    }

    pub fn constant(c: Gq) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial lambda.
    pub fn lambda() -> Self {
        Poly::new(vec![Gq::zero(), Gq::one()])
    }

    /// lambda - root.
    pub fn linear(root: &Gq) -> Self {
        Poly::new(vec![-root, Gq::one()])
    }

    pub fn coeffs(&self) -> &[Gq] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Gq {
        self.coeffs.get(k).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Gq {
        self.coeffs.last().cloned().unwrap_or_else(Gq::zero)
    }

    pub fn eval(&self, x: &Gq) -> Gq {
        let mut acc = Gq::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &Gq) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// (leading coefficient, monic polynomial). Zero maps to (0, 1).
    pub fn monic(&self) -> (Gq, Poly) {
        if self.is_zero() {
            return (Gq::zero(), Poly::one());
        }
        let lead = self.leading();
        let inv = lead.inv().expect("nonzero leading");
        (lead, self.scale(&inv))
    }

    pub fn conj_coeffs(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// p(-lambda).
    pub fn subst_neg(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
                .collect(),
        )
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, div: &Poly) -> Result<(Poly, Poly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lead_inv = div.leading().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Gq::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                let shift = k - dd;
                for (j, dc) in div.coeffs.iter().enumerate() {
                    let t = &rem[shift + j] - &(dc * &c);
                    rem[shift + j] = t;
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, div: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(div)?;
        if !r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(q)
    }

    /// Multiplicity of `root` as a zero of the polynomial (0 for non-roots,
    /// and 0 for the zero polynomial, whose vanishing order is unbounded).
    pub fn root_multiplicity(&self, root: &Gq) -> u32 {
        let mut m = 0;
        let lin = Poly::linear(root);
        let mut cur = self.clone();
        while !cur.is_zero() && cur.eval(root).is_zero() {
            cur = cur.div_exact(&lin).expect("root divides");
            m += 1;
        }
        m
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a, 'b> Add<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'b Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::new(out)
    }
}

impl<'a, 'b> Sub<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'b Poly) -> Poly {
        self + &(-rhs)
    }
}

impl<'a, 'b> Mul<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Gq::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &out[i + j] + &(a * b);
                out[i + j] = t;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({})", c),
                1 => format!("({})*x", c),
                _ => format!("({})*x^{}", c, k),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| Gq::from_int(c)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 2, 1]); // 1 + 2x + x^2
        let b = p(&[1, 1]); // 1 + x
        assert_eq!(&b * &b, a);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, b);
        assert!(r.is_zero());
    }

    #[test]
    fn multiplicity() {
        // (x - i)^2 (x + 1)
        let f = &Poly::linear(&Gq::i()).pow(2) * &Poly::linear(&Gq::from_int(-1));
        assert_eq!(f.root_multiplicity(&Gq::i()), 2);
        assert_eq!(f.root_multiplicity(&Gq::from_int(-1)), 1);
        assert_eq!(f.root_multiplicity(&Gq::from_int(3)), 0);
    }

    #[test]
    fn subst_neg_eval() {
        let f = p(&[1, 2, 3, 4]);
        let g = f.subst_neg();
        let x = Gq::from_ints(2, 1);
        assert_eq!(g.eval(&x), f.eval(&(-&x)));
    }
}
