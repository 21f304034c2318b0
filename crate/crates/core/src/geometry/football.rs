//! Two-point spherical footballs, handled analytically.
//!
//! The model metric is dr² + θ² sin²(r) dφ² with r ∈ [0, π], φ ∈ [0, 2π).
//! Both poles are cone points of angle 2πθ and every meridian has length π.

use std::f64::consts::PI;

use thiserror::Error;

use crate::rational::RationalScalar;

/// Simpson panels used by the area quadrature.
const QUADRATURE_PANELS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("football angle θ = {0} must be positive")]
pub struct NonPositiveTheta(pub String);

#[derive(Debug, Clone, PartialEq)]
pub struct FootballReport {
    pub theta: RationalScalar,
    /// Closed form 4πθ.
    pub area: f64,
    /// ∫₀^π 2πθ sin r dr by composite Simpson.
    pub quadrature_area: f64,
    /// Meridian length, pole to pole.
    pub pole_distance: f64,
}

impl FootballReport {
    /// Cone angle 2πθ at either pole.
    pub fn cone_angle(&self) -> f64 {
        2.0 * PI * self.theta.to_f64()
    }

    /// Area of the closed r-neighbourhood of a pole, 2πθ(1 − cos r).
    /// Saturates at the total area for r ≥ π.
    pub fn sigma_r_area(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, PI);
        2.0 * PI * self.theta.to_f64() * (1.0 - r.cos())
    }

    pub fn quadrature_relative_error(&self) -> f64 {
        (self.quadrature_area - self.area).abs() / self.area
    }
}

/// Circumference density 2π·θ·sin r of the rotation metric at radius r.
fn circle_length(theta: f64, r: f64) -> f64 {
    2.0 * PI * theta * r.sin()
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let interior: f64 = (1..panels)
        .map(|k| {
            let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
            weight * f(a + k as f64 * h)
        })
        .sum();
    (f(a) + f(b) + interior) * h / 3.0
}

pub fn build_football(theta: &RationalScalar) -> Result<FootballReport, NonPositiveTheta> {
    if !theta.is_positive() {
        return Err(NonPositiveTheta(theta.to_string()));
    }
    let t = theta.to_f64();
    let quadrature_area = simpson(|r| circle_length(t, r), 0.0, PI, QUADRATURE_PANELS);
    // g_rr = 1, so the meridian length is ∫₀^π 1 dr
    let pole_distance = simpson(|_| 1.0, 0.0, PI, 2);
    Ok(FootballReport {
        theta: theta.clone(),
        area: 4.0 * PI * t,
        quadrature_area,
        pole_distance,
    })
}
