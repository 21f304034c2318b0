//! Angle vectors, divisors and Euler-characteristic bookkeeping.
//!
//! An [`AngleVector`] holds θ = (θ₁, …, θₙ) with every θᵢ > 0; the cone angle
//! at the i-th singularity is 2π·θᵢ. The associated [`Divisor`] is β = θ − 1,
//! and χ(S, β) = Σβᵢ + χ(S) with χ(S) = 2 for the sphere.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{ParseRationalError, RationalScalar};

/// Euler characteristic of the underlying 2-sphere.
pub const SPHERE_EULER: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("angle at position {index} is `{value}`, but angles must be strictly positive")]
    NonPositiveAngle { index: usize, value: String },
    #[error("cannot parse angle at position {index}: {source}")]
    Parse {
        index: usize,
        #[source]
        source: ParseRationalError,
    },
    #[error("χ(S,β) = {chi} is not positive, so no spherical metric has this area")]
    NonPositiveChi { chi: RationalScalar },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AngleVector {
    entries: Vec<RationalScalar>,
}

impl AngleVector {
    pub fn new(entries: Vec<RationalScalar>) -> Result<Self, AngleError> {
        if let Some((index, value)) = entries.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(AngleError::NonPositiveAngle {
                index,
                value: value.to_string(),
            });
        }
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[RationalScalar] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cone angles 2π·θᵢ in radians.
    pub fn cone_angles(&self) -> Vec<f64> {
        self.entries.iter().map(|t| 2.0 * PI * t.to_f64()).collect()
    }
}

impl fmt::Display for AngleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Parse angle tokens exactly. Signs are not part of the angle grammar.
pub fn parse_angles<S: AsRef<str>>(tokens: &[S]) -> Result<AngleVector, AngleError> {
    let mut entries = Vec::with_capacity(tokens.len());
    for (index, token) in tokens.iter().enumerate() {
        let token = token.as_ref().trim();
        let value = match token.strip_prefix('-') {
            // A well-formed negative number is reported as a sign violation,
            // not a syntax error.
            Some(rest) => match RationalScalar::parse_unsigned(rest) {
                Ok(v) => -v,
                Err(source) => return Err(AngleError::Parse { index, source }),
            },
            None => RationalScalar::parse_unsigned(token).map_err(|source| AngleError::Parse { index, source })?,
        };
        entries.push(value);
    }
    AngleVector::new(entries)
}

/// β = θ − 1 over a base surface of Euler characteristic `base_euler`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    entries: Vec<RationalScalar>,
    base_euler: i64,
}

impl Divisor {
    pub fn entries(&self) -> &[RationalScalar] {
        &self.entries
    }

    pub fn base_euler(&self) -> i64 {
        self.base_euler
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn divisor(theta: &AngleVector) -> Divisor {
    let one = RationalScalar::one();
    Divisor {
        entries: theta.entries().iter().map(|t| t - &one).collect(),
        base_euler: SPHERE_EULER,
    }
}

/// χ(S, β) = Σβᵢ + χ(S), exactly.
pub fn euler_characteristic(d: &Divisor) -> RationalScalar {
    d.entries.iter().sum::<RationalScalar>() + RationalScalar::from_integer(d.base_euler)
}

/// Area 2π·χ(S, β) forced by Gauss–Bonnet for curvature ≡ 1.
pub fn target_area(d: &Divisor) -> Result<f64, AngleError> {
    let chi = euler_characteristic(d);
    if !chi.is_positive() {
        return Err(AngleError::NonPositiveChi { chi });
    }
    Ok(2.0 * PI * chi.to_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntegralityClass {
    AllNonIntegral,
    AllIntegral,
    Mixed,
    Empty,
}

impl IntegralityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::AllNonIntegral => "AllNonIntegral",
            Self::AllIntegral => "AllIntegral",
            Self::Mixed => "Mixed",
            Self::Empty => "Empty",
        }
    }
}

impl fmt::Display for IntegralityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn integrality_class(theta: &AngleVector) -> IntegralityClass {
    if theta.is_empty() {
        return IntegralityClass::Empty;
    }
    let naturals = theta.entries().iter().filter(|t| t.is_natural()).count();
    match naturals {
        0 => IntegralityClass::AllNonIntegral,
        k if k == theta.len() => IntegralityClass::AllIntegral,
        _ => IntegralityClass::Mixed,
    }
}
