//! Exact rational scalars.
//!
//! [`RationalScalar`] is a thin newtype over an arbitrary-precision
//! [`BigRational`], always kept in lowest terms with a positive denominator.
//! It adds the exact token grammar used by the command line and a stable
//! textual form (`"p/q"`, or `"p"` when the denominator is one) used in JSON.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty token")]
    Empty,
    #[error("malformed number `{0}` (expected INT, INT/POSINT or DECIMAL)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// An exact rational number in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RationalScalar(BigRational);

impl RationalScalar {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn half() -> Self {
        Self::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True for positive integers, i.e. membership in ℕ = {1, 2, 3, …}.
    pub fn is_natural(&self) -> bool {
        self.0.is_integer() && self.0.is_positive()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parse with an optional leading `-`.
    ///
    /// Grammar: `["-"] (INT | INT "/" POSINT | INT "." DIGITS)`. Decimals are
    /// expanded in base ten, so `"1.2"` is exactly `6/5`.
    pub fn parse_signed(token: &str) -> Result<Self, ParseRationalError> {
        let token = token.trim();
        match token.strip_prefix('-') {
            Some(rest) => Self::parse_unsigned(rest).map(|v| -v),
            None => Self::parse_unsigned(token),
        }
    }

    /// Parse a token without any sign.
    pub fn parse_unsigned(token: &str) -> Result<Self, ParseRationalError> {
        if token.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let malformed = || ParseRationalError::Malformed(token.to_string());
        let digits = |s: &str| -> Result<BigInt, ParseRationalError> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            BigInt::from_str(s).map_err(|_| malformed())
        };

        if let Some((num, den)) = token.split_once('/') {
            let num = digits(num)?;
            let den = digits(den)?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(token.to_string()));
            }
            return Ok(Self(BigRational::new(num, den)));
        }
        if let Some((int, frac)) = token.split_once('.') {
            let int = digits(int)?;
            let frac_value = digits(frac)?;
            let scale = num_traits::pow(BigInt::from(10u32), frac.len());
            return Ok(Self(BigRational::new(int * &scale + frac_value, scale)));
        }
        Ok(Self::from_integer(digits(token)?))
    }

    /// Distance to the nearest integer together with that integer.
    ///
    /// Ties (fractional part exactly 1/2) round down.
    pub fn nearest_integer(&self) -> (BigInt, RationalScalar) {
        let floor = self.floor();
        let below = self - &Self::from_integer(floor.clone());
        let above = Self::one() - &below;
        if below <= above {
            (floor, below)
        } else {
            (floor + 1, above)
        }
    }
}

pub fn is_odd(value: &BigInt) -> bool {
    value.is_odd()
}

impl fmt::Display for RationalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for RationalScalar {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_signed(s)
    }
}

impl From<i64> for RationalScalar {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl From<BigInt> for RationalScalar {
    fn from(value: BigInt) -> Self {
        Self::from_integer(value)
    }
}

impl From<BigRational> for RationalScalar {
    fn from(value: BigRational) -> Self {
        Self(value)
    }
}

impl Serialize for RationalScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::parse_signed(&text).map_err(serde::de::Error::custom)
    }
}

impl Neg for RationalScalar {
    type Output = RationalScalar;

    fn neg(self) -> Self::Output {
        Self(-self.0)
    }
}

impl Neg for &RationalScalar {
    type Output = RationalScalar;

    fn neg(self) -> Self::Output {
        RationalScalar(-&self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&RationalScalar> for &RationalScalar {
            type Output = RationalScalar;
            fn $method(self, rhs: &RationalScalar) -> RationalScalar {
                RationalScalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<RationalScalar> for RationalScalar {
            type Output = RationalScalar;
            fn $method(self, rhs: RationalScalar) -> RationalScalar {
                RationalScalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&RationalScalar> for RationalScalar {
            type Output = RationalScalar;
            fn $method(self, rhs: &RationalScalar) -> RationalScalar {
                RationalScalar(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::iter::Sum for RationalScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a RationalScalar> for RationalScalar {
    fn sum<I: Iterator<Item = &'a RationalScalar>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

/// Exact three-way comparison, used where the caller wants an explicit name.
pub fn compare(a: &RationalScalar, b: &RationalScalar) -> Ordering {
    a.cmp(b)
}
