//! Audit reports for constructed surfaces.
//!
//! Distances between singular points are shortest paths in the glued edge
//! graph. They are upper bounds on the intrinsic distance; geodesics through
//! triangle interiors are not traced.

use std::f64::consts::PI;

use serde::Serialize;

use super::football::FootballReport;
use super::gluing::{GluedEdge, GluedSurface};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConePoint {
    pub class: usize,
    /// Cone angle in radians.
    pub angle: f64,
    /// angle / 2π
    pub theta: f64,
    pub is_singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiMultiplicity {
    pub from: usize,
    pub to: usize,
    pub distance: f64,
    /// k when the distance is within tolerance of kπ for some k ≥ 1.
    pub multiple: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceReport {
    pub cone_points: Vec<ConePoint>,
    pub chi: i64,
    pub area: f64,
    pub gauss_bonnet_area: f64,
    pub gauss_bonnet_residual: f64,
    pub gauss_bonnet_ok: bool,
    /// Vertex classes of the singular points, indexing the matrix below.
    pub singular_classes: Vec<usize>,
    /// Entry (i, j) is the edge-graph distance between singular points i and
    /// j; the diagonal holds the shortest edge loop, if any.
    pub singular_pair_distances: Vec<Vec<Option<f64>>>,
    /// Glued edges whose endpoints are both singular (loops included).
    pub singular_edges: Vec<GluedEdge>,
    pub pi_multiplicity_flags: Vec<PiMultiplicity>,
    pub distances_are_upper_bounds: bool,
    pub tolerance: f64,
}

impl SurfaceReport {
    pub fn singular_count(&self) -> usize {
        self.singular_classes.len()
    }

    /// Shortest edge loop based at singular point `i`.
    pub fn shortest_loop(&self, i: usize) -> Option<f64> {
        self.singular_pair_distances[i][i]
    }

    /// Some pair of distinct singular points is joined by a glued edge
    /// shorter than π.
    pub fn has_short_singular_edge(&self) -> bool {
        self.singular_edges.iter().any(|e| e.from != e.to && e.length < PI)
    }

    /// Every pair of distinct singular points is joined by a glued edge
    /// shorter than π.
    pub fn all_singular_pairs_joined_below_pi(&self) -> bool {
        let k = self.singular_classes.len();
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let (a, b) = (self.singular_classes[i], self.singular_classes[j]);
                self.singular_edges
                    .iter()
                    .any(|e| ((e.from, e.to) == (a, b) || (e.from, e.to) == (b, a)) && e.length < PI)
            })
        })
    }

    pub fn audits_pass(&self) -> bool {
        self.gauss_bonnet_ok
    }
}

fn pi_multiple(distance: f64, tolerance: f64) -> Option<u64> {
    let k = (distance / PI).round();
    (k >= 1.0 && (distance - k * PI).abs() <= tolerance * distance.max(1.0)).then_some(k as u64)
}

/// Single-source shortest paths, optionally ignoring one edge.
fn shortest_from(vertices: usize, edges: &[GluedEdge], source: usize, skip: Option<usize>) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; vertices];
    let mut done = vec![false; vertices];
    dist[source] = 0.0;
    for _ in 0..vertices {
        let Some(u) = (0..vertices)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
        else {
            break;
        };
        done[u] = true;
        for (i, e) in edges.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let other = if e.from == u {
                e.to
            } else if e.to == u {
                e.from
            } else {
                continue;
            };
            let candidate = dist[u] + e.length;
            if candidate < dist[other] {
                dist[other] = candidate;
            }
        }
    }
    dist
}

/// Shortest closed edge walk at `v` that does not just retrace one edge.
fn shortest_loop(vertices: usize, edges: &[GluedEdge], v: usize) -> Option<f64> {
    edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.from == v || e.to == v)
        .map(|(i, e)| {
            if e.from == e.to {
                e.length
            } else {
                let other = if e.from == v { e.to } else { e.from };
                e.length + shortest_from(vertices, edges, other, Some(i))[v]
            }
        })
        .filter(|d| d.is_finite())
        .min_by(f64::total_cmp)
}

pub fn surface_report(s: &GluedSurface, tolerance: f64) -> SurfaceReport {
    let cone_points: Vec<ConePoint> = s
        .cone_angles
        .iter()
        .enumerate()
        .map(|(class, &angle)| ConePoint {
            class,
            angle,
            theta: angle / (2.0 * PI),
            is_singular: s.is_singular(class, tolerance),
        })
        .collect();
    let singular_classes: Vec<usize> = cone_points.iter().filter(|c| c.is_singular).map(|c| c.class).collect();
    let v = s.vertex_count();

    let singular_pair_distances: Vec<Vec<Option<f64>>> = singular_classes
        .iter()
        .map(|&a| {
            let from_a = shortest_from(v, &s.edges, a, None);
            singular_classes
                .iter()
                .map(|&b| {
                    if a == b {
                        shortest_loop(v, &s.edges, a)
                    } else {
                        Some(from_a[b]).filter(|d| d.is_finite())
                    }
                })
                .collect()
        })
        .collect();

    let mut pi_multiplicity_flags = Vec::new();
    for (i, row) in singular_pair_distances.iter().enumerate() {
        for (j, entry) in row.iter().enumerate().skip(i) {
            if let Some(distance) = *entry {
                pi_multiplicity_flags.push(PiMultiplicity {
                    from: singular_classes[i],
                    to: singular_classes[j],
                    distance,
                    multiple: pi_multiple(distance, tolerance),
                });
            }
        }
    }

    let singular_edges = s
        .edges
        .iter()
        .filter(|e| cone_points[e.from].is_singular && cone_points[e.to].is_singular)
        .copied()
        .collect();

    SurfaceReport {
        cone_points,
        chi: s.euler_char,
        area: s.total_area,
        gauss_bonnet_area: s.gauss_bonnet_area(),
        gauss_bonnet_residual: s.gauss_bonnet_residual(),
        gauss_bonnet_ok: s.gauss_bonnet_ok(tolerance),
        singular_classes,
        singular_pair_distances,
        singular_edges,
        pi_multiplicity_flags,
        distances_are_upper_bounds: true,
        tolerance,
    }
}

/// Express a football in the same report shape. The pole-to-pole distance
/// is the exact meridian length, not an edge-graph bound.
pub fn football_surface_report(f: &FootballReport, tolerance: f64) -> SurfaceReport {
    let angle = f.cone_angle();
    let singular = (angle - 2.0 * PI).abs() > tolerance;
    let cone_points: Vec<ConePoint> = (0..2)
        .map(|class| ConePoint {
            class,
            angle,
            theta: f.theta.to_f64(),
            is_singular: singular,
        })
        .collect();
    let gauss_bonnet_area = 2.0 * PI * (2.0 + 2.0 * (f.theta.to_f64() - 1.0));
    let residual = (f.area - gauss_bonnet_area).abs();
    let meridian = GluedEdge {
        from: 0,
        to: 1,
        length: f.pole_distance,
    };
    let (singular_classes, distances, edges, flags) = if singular {
        (
            vec![0, 1],
            vec![vec![None, Some(f.pole_distance)], vec![Some(f.pole_distance), None]],
            vec![meridian],
            vec![PiMultiplicity {
                from: 0,
                to: 1,
                distance: f.pole_distance,
                multiple: pi_multiple(f.pole_distance, tolerance),
            }],
        )
    } else {
        (Vec::new(), Vec::new(), Vec::new(), Vec::new())
    };
    SurfaceReport {
        cone_points,
        chi: 2,
        area: f.area,
        gauss_bonnet_area,
        gauss_bonnet_residual: residual,
        gauss_bonnet_ok: residual < tolerance * f.area.max(1.0)
            && f.quadrature_relative_error() < tolerance,
        singular_classes,
        singular_pair_distances: distances,
        singular_edges: edges,
        pi_multiplicity_flags: flags,
        distances_are_upper_bounds: false,
        tolerance,
    }
}
