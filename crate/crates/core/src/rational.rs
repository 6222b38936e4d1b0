//! Exact rational and complex-rational scalars.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_rational::BigRational as Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseScalarError(pub String);

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `2^-k`.
pub fn pow2_neg(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k as usize)
}

/// `k / 2^e`.
pub fn dyadic(k: i64, e: u32) -> Q {
    Q::new(BigInt::from(k), BigInt::one() << e as usize)
}

/// Smallest `k` with `2^-k <= prec` (prec > 0).
pub fn bits_for(prec: &Q) -> u32 {
    assert!(prec.is_positive(), "precision must be positive");
    let mut k = 0u32;
    while pow2_neg(k) > *prec {
        k += 1;
    }
    k
}

/// Parses `3`, `-3/4` or a finite decimal such as `0.125`.
pub fn parse_q(s: &str) -> Result<Q, ParseScalarError> {
    let t = s.trim();
    let err = || ParseScalarError(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mut n = BigInt::from_str(&digits).map_err(|_| err())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Q::new(n, d));
    }
    BigInt::from_str(t).map(Q::from_integer).map_err(|_| err())
}

/// Floor of the square root of a nonnegative rational, scaled: returns `m`
/// with `m^2 <= s * 4^k < (m+1)^2`.
pub(crate) fn scaled_isqrt(s: &Q, k: u32) -> BigInt {
    let scaled = s * Q::from_integer(BigInt::one() << (2 * k as usize));
    scaled.floor().to_integer().sqrt()
}

/// Exact square root when `s` is the square of a rational.
pub(crate) fn exact_sqrt(s: &Q) -> Option<Q> {
    if s.is_negative() {
        return None;
    }
    let n = s.numer().sqrt();
    let d = s.denom().sqrt();
    (&n * &n == *s.numer() && &d * &d == *s.denom()).then(|| Q::new(n, d))
}

/// A complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexQ {
    pub re: Q,
    pub im: Q,
}

impl Default for ComplexQ {
    fn default() -> Self {
        Self::zero()
    }
}

impl ComplexQ {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Q::zero())
    }

    pub fn one() -> Self {
        Self::real(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `|z|^2`, which is always rational.
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|z| > q`, decided exactly.
    pub fn modulus_gt(&self, q: &Q) -> bool {
        q.is_negative() || self.norm_sqr() > q * q
    }

    /// A rational `B` with `|z| <= B`.
    pub fn modulus_bound(&self) -> Q {
        self.re.abs() + self.im.abs()
    }

    pub fn scale(&self, r: &Q) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        let d = other.norm_sqr();
        if d.is_zero() {
            return None;
        }
        let num = self * &other.conj();
        Some(Self::new(num.re / &d, num.im / d))
    }
}

impl From<Q> for ComplexQ {
    fn from(re: Q) -> Self {
        Self::real(re)
    }
}

impl Add for &ComplexQ {
    type Output = ComplexQ;
    fn add(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Add for ComplexQ {
    type Output = ComplexQ;
    fn add(self, o: ComplexQ) -> ComplexQ {
        &self + &o
    }
}

impl Sub for &ComplexQ {
    type Output = ComplexQ;
    fn sub(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Sub for ComplexQ {
    type Output = ComplexQ;
    fn sub(self, o: ComplexQ) -> ComplexQ {
        &self - &o
    }
}

impl Mul for &ComplexQ {
    type Output = ComplexQ;
    fn mul(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Mul for ComplexQ {
    type Output = ComplexQ;
    fn mul(self, o: ComplexQ) -> ComplexQ {
        &self * &o
    }
}

impl Neg for &ComplexQ {
    type Output = ComplexQ;
    fn neg(self) -> ComplexQ {
        ComplexQ::new(-&self.re, -&self.im)
    }
}

impl Neg for ComplexQ {
    type Output = ComplexQ;
    fn neg(self) -> ComplexQ {
        -&self
    }
}

impl fmt::Display for ComplexQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl FromStr for ComplexQ {
    type Err = ParseScalarError;

    /// Accepts `a`, `b*i`, `a+b*i`, `a-b*i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ParseScalarError(s.to_string());
        if let Some(body) = t.strip_suffix("*i") {
            // split at the last sign that is not the leading one
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(i, _)| i)
                .last();
            return match split {
                Some(i) => {
                    let re = parse_q(&body[..i])?;
                    let im = parse_q(body[i..].trim_start_matches('+'))?;
                    Ok(ComplexQ::new(re, im))
                }
                None => Ok(ComplexQ::new(Q::zero(), parse_q(body)?)),
            };
        }
        if t.ends_with('i') {
            return Err(err());
        }
        Ok(ComplexQ::real(parse_q(&t)?))
    }
}
