//! The Gaussian rationals Q(i): the coefficient field of every loop entry.
//!
//! Values are stored as (num_re + num_im * i) / den with den > 0 and the
//! triple coprime, so each arithmetic operation costs a single integer gcd.
//! The total order is lexicographic on (re, im), used only to fix canonical
//! representations (sorted denominator factors, deterministic pole order).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gq {
    num_re: BigInt,
    num_im: BigInt,
    den: BigInt,
}

impl Default for Gq {
    fn default() -> Self {
        Gq::zero()
    }
}

impl Gq {
    fn reduced(num_re: BigInt, num_im: BigInt, den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        let mut g = num_re.gcd(&num_im).gcd(&den);
        if g.is_zero() {
            g = BigInt::one();
        }
        let (num_re, num_im, den) = (&num_re / &g, &num_im / &g, &den / &g);
        if den.is_negative() {
            Gq {
                num_re: -num_re,
                num_im: -num_im,
                den: -den,
            }
        } else {
            Gq {
                num_re,
                num_im,
                den,
            }
        }
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        let den = re.denom().lcm(im.denom());
        let num_re = re.numer() * (&den / re.denom());
        let num_im = im.numer() * (&den / im.denom());
        Gq::reduced(num_re, num_im, den)
    }

    pub fn from_int(n: i64) -> Self {
        Gq {
            num_re: BigInt::from(n),
            num_im: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Gq {
            num_re: BigInt::from(re),
            num_im: BigInt::from(im),
            den: BigInt::one(),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0);
        Gq::reduced(BigInt::from(num), BigInt::zero(), BigInt::from(den))
    }

    pub fn zero() -> Self {
        Gq::from_int(0)
    }

    pub fn one() -> Self {
        Gq::from_int(1)
    }

    pub fn i() -> Self {
        Gq::from_ints(0, 1)
    }

    pub fn re(&self) -> BigRational {
        BigRational::new(self.num_re.clone(), self.den.clone())
    }

    pub fn im(&self) -> BigRational {
        BigRational::new(self.num_im.clone(), self.den.clone())
    }

    /// The common positive denominator of the reduced representation.
    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Numerators over the common denominator.
    pub fn nums(&self) -> (&BigInt, &BigInt) {
        (&self.num_re, &self.num_im)
    }

    pub fn is_zero(&self) -> bool {
        self.num_re.is_zero() && self.num_im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num_im.is_zero() && self.num_re == self.den
    }

    pub fn is_real(&self) -> bool {
        self.num_im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.num_re.is_zero()
    }

    pub fn im_positive(&self) -> bool {
        self.num_im.is_positive()
    }

    pub fn re_negative(&self) -> bool {
        self.num_re.is_negative()
    }

    pub fn conj(&self) -> Self {
        Gq {
            num_re: self.num_re.clone(),
            num_im: -self.num_im.clone(),
            den: self.den.clone(),
        }
    }

    /// re^2 + im^2, a nonnegative rational; zero only for zero.
    pub fn norm_sq(&self) -> BigRational {
        BigRational::new(
            &self.num_re * &self.num_re + &self.num_im * &self.num_im,
            &self.den * &self.den,
        )
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.num_re * &self.num_re + &self.num_im * &self.num_im;
        Ok(Gq::reduced(
            &self.num_re * &self.den,
            -(&self.num_im * &self.den),
            norm,
        ))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        Gq::reduced(
            &self.num_re * n,
            &self.num_im * n,
            self.den.clone(),
        )
    }
}

impl PartialOrd for Gq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (re, im); fixes canonical forms, not an algebraic order.
impl Ord for Gq {
    fn cmp(&self, other: &Self) -> Ordering {
        // denominators are positive, so cross-multiplication preserves order
        let left = &self.num_re * &other.den;
        let right = &other.num_re * &self.den;
        left.cmp(&right).then_with(|| {
            let left = &self.num_im * &other.den;
            let right = &other.num_im * &self.den;
            left.cmp(&right)
        })
    }
}

macro_rules! binop {
    ($trait:ident, $fn:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b Gq> for &'a Gq {
            type Output = Gq;
            fn $fn(self, rhs: &'b Gq) -> Gq {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl $trait<Gq> for Gq {
            type Output = Gq;
            fn $fn(self, rhs: Gq) -> Gq {
                (&self).$fn(&rhs)
            }
        }
        impl<'b> $trait<&'b Gq> for Gq {
            type Output = Gq;
            fn $fn(self, rhs: &'b Gq) -> Gq {
                (&self).$fn(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    if a.den == b.den {
        Gq::reduced(
            &a.num_re + &b.num_re,
            &a.num_im + &b.num_im,
            a.den.clone(),
        )
    } else {
        let g = a.den.gcd(&b.den);
        let fa = &b.den / &g;
        let fb = &a.den / &g;
        Gq::reduced(
            &a.num_re * &fa + &b.num_re * &fb,
            &a.num_im * &fa + &b.num_im * &fb,
            &a.den * &fa,
        )
    }
});
binop!(Sub, sub, |a, b| a + &(-b));
binop!(Mul, mul, |a, b| {
    if a.is_zero() || b.is_zero() {
        return Gq::zero();
    }
    Gq::reduced(
        &a.num_re * &b.num_re - &a.num_im * &b.num_im,
        &a.num_re * &b.num_im + &a.num_im * &b.num_re,
        &a.den * &b.den,
    )
});
binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division by zero Gq");
    a * &inv
});

impl Neg for &Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq {
            num_re: -self.num_re.clone(),
            num_im: -self.num_im.clone(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        -&self
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Textual syntax "a/b+c/d*i" with zero parts omitted; "0" for zero.
impl fmt::Display for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let re = self.re();
        let im = self.im();
        let mut out = String::new();
        if !re.is_zero() {
            out.push_str(&fmt_rat(&re));
        }
        if !im.is_zero() {
            if !re.is_zero() && im.is_positive() {
                out.push('+');
            }
            out.push_str(&fmt_rat(&im));
            out.push_str("*i");
        }
        write!(f, "{}", out)
    }
}

impl fmt::Debug for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| Error::ParseError(format!("bad integer: {num}")))?;
    let d = BigInt::from_str(den).map_err(|_| Error::ParseError(format!("bad integer: {den}")))?;
    if d.is_zero() {
        return Err(Error::ParseError(format!("zero denominator in {s}")));
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Gq {
    type Err = Error;

    /// Accepts "a/b", "c/d*i", "a/b+c/d*i", "a/b-c/d*i", and the shorthands
    /// "i", "-i", "3i".
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::ParseError("empty scalar".into()));
        }
        // Split at the last top-level '+'/'-' that is not a leading sign.
        let bytes = s.as_bytes();
        let mut split_at = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-')
                && bytes[idx - 1] as char != '/'
                && bytes[idx - 1] as char != '+'
                && bytes[idx - 1] as char != '-'
            {
                split_at = Some(idx);
                break;
            }
        }
        let (re_part, im_part): (&str, Option<(&str, bool)>) = match split_at {
            Some(idx) if s[idx..].contains('i') => {
                let sign_neg = bytes[idx] as char == '-';
                (&s[..idx], Some((&s[idx + 1..], sign_neg)))
            }
            _ => {
                if s.contains('i') {
                    ("", Some((s.as_str(), false)))
                } else {
                    (s.as_str(), None)
                }
            }
        };
        let re = if re_part.is_empty() {
            BigRational::zero()
        } else {
            parse_rat(re_part)?
        };
        let im = match im_part {
            None => BigRational::zero(),
            Some((raw, neg)) => {
                let raw = raw.trim();
                let body = raw
                    .strip_suffix("*i")
                    .or_else(|| raw.strip_suffix('i'))
                    .ok_or_else(|| Error::ParseError(format!("bad imaginary part: {raw}")))?;
                let mag = if body.is_empty() || body == "+" {
                    BigRational::one()
                } else if body == "-" {
                    -BigRational::one()
                } else {
                    parse_rat(body)?
                };
                if neg {
                    -mag
                } else {
                    mag
                }
            }
        };
        Ok(Gq::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Gq::from_ints(1, 2);
        let b = Gq::from_ints(3, -1);
        assert_eq!(&a * &b, Gq::from_ints(5, 5));
        assert_eq!(&a + &b, Gq::from_ints(4, 1));
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(a.conj().conj(), a);
        // reduction keeps representations canonical
        let x = &Gq::ratio(2, 6) + &Gq::ratio(1, 6);
        assert_eq!(x, Gq::ratio(1, 2));
        assert_eq!(x.den(), &BigInt::from(2));
    }

    #[test]
    fn display_roundtrip() {
        for s in [
            "0",
            "1",
            "-1",
            "1/2",
            "-2/3",
            "1*i",
            "-1*i",
            "1/2+1/3*i",
            "1/2-1/3*i",
            "-5+2*i",
        ] {
            let v: Gq = s.parse().unwrap();
            assert_eq!(v.to_string(), s, "canonical form of {s}");
            let again: Gq = v.to_string().parse().unwrap();
            assert_eq!(again, v);
        }
        // shorthands parse but re-emit canonically
        let v: Gq = "i".parse().unwrap();
        assert_eq!(v, Gq::i());
        let v: Gq = "-i".parse().unwrap();
        assert_eq!(v, -Gq::i());
        let v: Gq = "3i".parse().unwrap();
        assert_eq!(v, Gq::from_ints(0, 3));
        assert!("1/0".parse::<Gq>().is_err());
    }

    #[test]
    fn canonical_order_is_total() {
        let mut xs = vec![
            Gq::from_ints(1, -1),
            Gq::from_ints(0, 1),
            Gq::from_ints(1, 1),
            Gq::from_ints(0, -1),
        ];
        xs.sort();
        assert_eq!(
            xs,
            vec![
                Gq::from_ints(0, -1),
                Gq::from_ints(0, 1),
                Gq::from_ints(1, -1),
                Gq::from_ints(1, 1),
            ]
        );
        // cross-denominator comparisons
        assert!(Gq::ratio(1, 3) < Gq::ratio(1, 2));
        assert!(Gq::ratio(-1, 2) < Gq::ratio(-1, 3));
    }
}
