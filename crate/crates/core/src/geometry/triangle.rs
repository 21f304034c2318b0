//! Geodesic triangles on the unit sphere, specified by their corner angles.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::rational::RationalScalar;

/// The first triangle inequality that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangleViolation {
    #[error("angle {corner} = {value} is not in (0, π)")]
    AngleOutOfRange { corner: usize, value: f64 },
    #[error("angle sum {sum} does not exceed π, so the excess is not positive")]
    NonPositiveExcess { sum: f64 },
    #[error("the other two angles minus angle {corner} reach π ({value} ≥ π)")]
    CornerTooSmall { corner: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid spherical triangle: {0}")]
pub struct InvalidTriangle(pub TriangleViolation);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTriangle {
    /// Corner angles (A, B, C) in radians.
    pub angles: [f64; 3],
    /// Sides (a, b, c) in radians; side k is opposite corner k.
    pub sides: [f64; 3],
}

impl SphericalTriangle {
    pub fn area(&self) -> f64 {
        self.angles.iter().sum::<f64>() - PI
    }
}

impl fmt::Display for SphericalTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.angles;
        let [sa, sb, sc] = self.sides;
        write!(f, "angles ({a:.9}, {b:.9}, {c:.9}) sides ({sa:.9}, {sb:.9}, {sc:.9})")
    }
}

/// Build a triangle from its angles (radians).
///
/// The four strict inequalities are checked in floating point, in order:
/// each angle in (0, π), A + B + C > π, then the three "two minus one" bounds.
pub fn triangle_from_angles(a: f64, b: f64, c: f64) -> Result<SphericalTriangle, InvalidTriangle> {
    let angles = [a, b, c];
    for (corner, &value) in angles.iter().enumerate() {
        if !(value > 0.0 && value < PI) {
            return Err(InvalidTriangle(TriangleViolation::AngleOutOfRange { corner, value }));
        }
    }
    let sum = a + b + c;
    if sum <= PI {
        return Err(InvalidTriangle(TriangleViolation::NonPositiveExcess { sum }));
    }
    for (corner, angle) in angles.iter().enumerate() {
        let value = sum - 2.0 * angle;
        if value >= PI {
            return Err(InvalidTriangle(TriangleViolation::CornerTooSmall { corner, value }));
        }
    }
    Ok(SphericalTriangle {
        angles,
        sides: sides_from_angles(angles),
    })
}

/// Build a triangle whose angles are exact rational multiples of π.
///
/// Validation happens in exact arithmetic, so boundary cases such as
/// B + C − A = π are rejected even when floating point would round past them.
pub fn triangle_from_pi_multiples(multiples: &[RationalScalar; 3]) -> Result<SphericalTriangle, InvalidTriangle> {
    let one = RationalScalar::one();
    for (corner, m) in multiples.iter().enumerate() {
        if !m.is_positive() || *m >= one {
            return Err(InvalidTriangle(TriangleViolation::AngleOutOfRange {
                corner,
                value: m.to_f64() * PI,
            }));
        }
    }
    let sum: RationalScalar = multiples.iter().sum();
    if sum <= one {
        return Err(InvalidTriangle(TriangleViolation::NonPositiveExcess { sum: sum.to_f64() * PI }));
    }
    let two = RationalScalar::from_integer(2);
    for (corner, m) in multiples.iter().enumerate() {
        let value = &sum - &(&two * m);
        if value >= one {
            return Err(InvalidTriangle(TriangleViolation::CornerTooSmall {
                corner,
                value: value.to_f64() * PI,
            }));
        }
    }
    let angles = [0, 1, 2].map(|k| multiples[k].to_f64() * PI);
    Ok(SphericalTriangle {
        angles,
        sides: sides_from_angles(angles),
    })
}

/// Spherical excess A + B + C − π.
pub fn triangle_area(t: &SphericalTriangle) -> f64 {
    t.area()
}

/// Dual law of cosines, cos a = (cos A + cos B cos C) / (sin B sin C), in its
/// half-angle form tan²(a/2) = −cos S cos(S−A) / (cos(S−B) cos(S−C)) with
/// S = (A+B+C)/2. The half-angle form stays accurate near a = 0 and a = π.
pub fn sides_from_angles(angles: [f64; 3]) -> [f64; 3] {
    let s = angles.iter().sum::<f64>() / 2.0;
    let side = |k: usize| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let num = (-s.cos() * (s - angles[k]).cos()).max(0.0);
        let den = ((s - angles[i]).cos() * (s - angles[j]).cos()).max(0.0);
        2.0 * num.sqrt().atan2(den.sqrt())
    };
    [side(0), side(1), side(2)]
}

/// Law of cosines for sides, cos A = (cos a − cos b cos c) / (sin b sin c),
/// in its half-angle form tan²(A/2) = sin(s−b) sin(s−c) / (sin s sin(s−a)).
pub fn angles_from_sides(sides: [f64; 3]) -> [f64; 3] {
    let s = sides.iter().sum::<f64>() / 2.0;
    let angle = |k: usize| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let num = ((s - sides[i]).sin() * (s - sides[j]).sin()).max(0.0);
        let den = (s.sin() * (s - sides[k]).sin()).max(0.0);
        2.0 * num.sqrt().atan2(den.sqrt())
    };
    [angle(0), angle(1), angle(2)]
}
