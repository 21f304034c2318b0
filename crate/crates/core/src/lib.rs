//! Exact admissibility of cone-angle vectors for spherical metrics on the
//! 2-sphere, plus a small kit of constructed spherical surfaces used to audit
//! Gauss–Bonnet, cone-angle and distance claims.
//!
//! The classifier path ([`angles`], [`lattice`], [`classifier`], [`sweep`])
//! is exact rational arithmetic throughout. The [`geometry`] module is
//! floating point with explicit tolerances.

pub mod angles;
pub mod classifier;
pub mod cli;
pub mod geometry;
pub mod lattice;
pub mod rational;
pub mod sweep;

pub use angles::{parse_angles, AngleError, AngleVector, Divisor, IntegralityClass};
pub use classifier::{classify, polygon_inequality, Certificate, DecidingRule, HolonomyNote, Verdict};
pub use lattice::{nearest_odd, nearest_odd_bruteforce, LatticeResult};
pub use rational::RationalScalar;
