//! Concrete singular spherical surfaces and their audits.
//!
//! Everything here runs in `f64` with an absolute/relative tolerance
//! (default 1e-9). The classifier never consumes these values.

pub mod football;
pub mod gluing;
pub mod report;
pub mod triangle;

pub use football::{build_football, FootballReport, NonPositiveTheta};
pub use gluing::{
    double_of_triangle, glue_surface, octant_double, torus_example, GlueError, GluedSurface, GluingDescription,
    DEFAULT_TOLERANCE,
};
pub use report::{football_surface_report, surface_report, SurfaceReport};
pub use triangle::{
    angles_from_sides, triangle_area, triangle_from_angles, triangle_from_pi_multiples, InvalidTriangle,
    SphericalTriangle, TriangleViolation,
};
