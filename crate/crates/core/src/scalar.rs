//! The coefficient field: Gaussian rationals Q(i).
//!
//! A [`GaussianRational`] is a complex number `re + im·i` whose real and
//! imaginary parts are arbitrary-precision rationals.  Q(i) is a field, so
//! every nonzero element has an exact inverse and linear algebra over it is
//! free of rounding.  Conversion to `Complex64` happens only at the numeric
//! boundary (plotting points on cycles, quadrature) and is explicitly lossy.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An element of Q(i): `re + im·i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

/// Failure to parse a rational or Gaussian-rational literal.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer in rational literal {0:?}")]
    BadInteger(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
}

/// Parses a rational written as `numer` or `numer/denom` in base ten.
///
/// This is the wire syntax for all exact scalars: signs allowed on the
/// numerator, denominator must be a nonzero integer.  The result is reduced.
pub fn parse_rational(text: &str) -> Result<BigRational, ScalarParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer =
        BigInt::from_str(numer).map_err(|_| ScalarParseError::BadInteger(text.to_string()))?;
    let denom =
        BigInt::from_str(denom).map_err(|_| ScalarParseError::BadInteger(text.to_string()))?;
    if denom.is_zero() {
        return Err(ScalarParseError::ZeroDenominator(text.to_string()));
    }
    Ok(BigRational::new(numer, denom))
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// The real rational `re`, as an element of Q(i).
    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    /// The rational integer `n`.
    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The Gaussian integer `a + b·i`.
    pub fn from_ints(a: i64, b: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(a)),
            im: BigRational::from_integer(BigInt::from(b)),
        }
    }

    /// The rational `n/d` (panics if `d = 0`).
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Parses `re` and `im` from the wire syntax of [`parse_rational`].
    pub fn parse(re: &str, im: &str) -> Result<Self, ScalarParseError> {
        Ok(GaussianRational { re: parse_rational(re)?, im: parse_rational(im)? })
    }

    pub fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussianRational { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit `i`.
    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True when the imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate `re − im·i`.
    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|² = re² + im²`, an exact non-negative rational.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.abs_sq();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Lossy conversion to hardware complex floating point.
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Wire form: the pair of rational strings `["re", "im"]`.
    pub fn to_wire(&self) -> [String; 2] {
        [self.re.to_string(), self.im.to_string()]
    }
}

/// Best-effort `f64` value of an exact rational.
///
/// `BigRational::to_f64` returns `None` only when numerator or denominator
/// overflow the conversion entirely; for the magnitudes this library
/// produces the quotient path below is always taken.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY * sign_of(q.numer()));
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

fn sign_of(n: &BigInt) -> f64 {
    if n.is_negative() {
        -1.0
    } else {
        1.0
    }
}

// ---- arithmetic ----

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    /// Panics on a zero divisor; use [`GaussianRational::inverse`] to test first.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        let inv = rhs.inverse().expect("division by zero in Q(i)");
        self * &inv
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

// ---- formatting & serde ----

impl fmt::Display for GaussianRational {
    /// Human form: `0`, `3/2`, `i`, `-2i`, `1+i`, `3/2-5i`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut lead = true;
        if !self.re.is_zero() {
            write!(out, "{}", self.re)?;
            lead = false;
        }
        if !self.im.is_zero() {
            if !lead && !self.im.is_negative() {
                write!(out, "+")?;
            }
            if self.im.is_one() {
                write!(out, "i")?;
            } else if (-&self.im).is_one() {
                write!(out, "-i")?;
            } else {
                write!(out, "{}i", self.im)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{self}")
    }
}

impl Serialize for GaussianRational {
    /// Serialized as the two-string array `["re", "im"]`, exact.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(deserializer)?;
        GaussianRational::parse(&re, &im).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    #[test]
    fn field_axioms_on_sample_points() {
        let samples = [
            g(0, 0),
            g(1, 0),
            g(0, 1),
            g(-3, 2),
            GaussianRational::from_ratio(7, 3),
            GaussianRational::new(
                BigRational::new(BigInt::from(-5), BigInt::from(4)),
                BigRational::new(BigInt::from(9), BigInt::from(7)),
            ),
        ];
        for x in &samples {
            for y in &samples {
                for z in &samples {
                    assert_eq!(&(x + y) + z, x + &(y + z));
                    assert_eq!(&(x * y) * z, x * &(y * z));
                    assert_eq!(x * &(y + z), &(x * y) + &(x * z));
                }
                assert_eq!(x + y, y + x);
                assert_eq!(x * y, y * x);
            }
            assert_eq!(x + &GaussianRational::zero(), x.clone());
            assert_eq!(x * &GaussianRational::one(), x.clone());
            assert_eq!(x + &(-x), GaussianRational::zero());
            if !x.is_zero() {
                assert_eq!(x * &x.inverse().unwrap(), GaussianRational::one());
            }
        }
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, g(-1, 0));
    }

    #[test]
    fn conjugation_and_modulus() {
        let z = g(3, -4);
        assert_eq!(&z * &z.conj(), g(25, 0));
        assert_eq!(z.abs_sq(), BigRational::from_integer(BigInt::from(25)));
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert_eq!(GaussianRational::zero().inverse(), None);
    }

    #[test]
    fn parses_wire_rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-7").unwrap(), BigRational::from_integer((-7).into()));
        assert_eq!(parse_rational("4/6").unwrap(), BigRational::new(2.into(), 3.into()));
        assert!(matches!(parse_rational("1/0"), Err(ScalarParseError::ZeroDenominator(_))));
        assert!(matches!(parse_rational(""), Err(ScalarParseError::Empty)));
        assert!(matches!(parse_rational("x"), Err(ScalarParseError::BadInteger(_))));
    }

    #[test]
    fn display_covers_sign_cases() {
        assert_eq!(g(0, 0).to_string(), "0");
        assert_eq!(g(3, 0).to_string(), "3");
        assert_eq!(g(0, 1).to_string(), "i");
        assert_eq!(g(0, -1).to_string(), "-i");
        assert_eq!(g(0, -2).to_string(), "-2i");
        assert_eq!(g(1, 1).to_string(), "1+i");
        assert_eq!(GaussianRational::parse("3/2", "-5").unwrap().to_string(), "3/2-5i");
    }

    #[test]
    fn to_complex_is_close() {
        let z = GaussianRational::parse("1/3", "-2/7").unwrap().to_complex64();
        assert!((z.re - 1.0 / 3.0).abs() < 1e-15);
        assert!((z.im + 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn serde_round_trip_is_exact() {
        let z = GaussianRational::parse("-355/113", "22/7").unwrap();
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"["-355/113","22/7"]"#);
        let back: GaussianRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z);
    }
}
