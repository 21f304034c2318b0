//! Closed surfaces assembled from spherical triangles by edge identification.
//!
//! Corner k of a triangle sits opposite edge slot k. Slot k runs from corner
//! k+1 to corner k+2 (indices mod 3). A pairing glues two slots start-to-start
//! and end-to-end, or start-to-end when `reversed` is set. Vertex classes are
//! the equivalence classes of corners under these identifications.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::triangle::{triangle_from_pi_multiples, InvalidTriangle, SphericalTriangle};
use crate::rational::RationalScalar;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GlueError {
    #[error("triangle id `{0}` is defined twice")]
    DuplicateTriangle(String),
    #[error("pairing refers to unknown triangle `{0}`")]
    UnknownTriangle(String),
    #[error("edge slot {slot} of triangle `{triangle}` does not exist (slots are 0, 1, 2)")]
    SlotOutOfRange { triangle: String, slot: usize },
    #[error("edge slot {slot} of triangle `{triangle}` appears in {count} pairings, expected exactly 1")]
    UnmatchedEdge { triangle: String, slot: usize, count: usize },
    #[error("paired edges differ in length: `{a_triangle}`[{a_slot}] = {a_length} vs `{b_triangle}`[{b_slot}] = {b_length}")]
    LengthMismatch {
        a_triangle: String,
        a_slot: usize,
        a_length: f64,
        b_triangle: String,
        b_slot: usize,
        b_length: f64,
    },
    #[error("triangle `{id}`: {source}")]
    InvalidTriangle {
        id: String,
        #[source]
        source: InvalidTriangle,
    },
}

impl GlueError {
    /// True for failures of the geometric audits (closedness, lengths,
    /// triangle validity), as opposed to malformed references.
    pub fn is_audit_failure(&self) -> bool {
        matches!(
            self,
            Self::UnmatchedEdge { .. } | Self::LengthMismatch { .. } | Self::InvalidTriangle { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleSpec {
    pub id: String,
    /// Corner angles as rational multiples of π.
    pub angles_pi: [RationalScalar; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingSpec {
    pub a: (String, usize),
    pub b: (String, usize),
    #[serde(default)]
    pub reversed: bool,
}

/// The JSON gluing description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingDescription {
    pub triangles: Vec<TriangleSpec>,
    pub pairings: Vec<PairingSpec>,
}

impl GluingDescription {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeSlot {
    pub triangle: usize,
    pub slot: usize,
}

impl EdgeSlot {
    pub fn start(self) -> Corner {
        Corner {
            triangle: self.triangle,
            corner: (self.slot + 1) % 3,
        }
    }

    pub fn end(self) -> Corner {
        Corner {
            triangle: self.triangle,
            corner: (self.slot + 2) % 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Corner {
    pub triangle: usize,
    pub corner: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgePairing {
    pub a: EdgeSlot,
    pub b: EdgeSlot,
    pub reversed: bool,
}

/// A glued edge, as seen from the vertex classes it joins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GluedEdge {
    pub from: usize,
    pub to: usize,
    pub length: f64,
}

/// A validated closed triangulated surface. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedSurface {
    pub triangle_ids: Vec<String>,
    pub triangles: Vec<SphericalTriangle>,
    pub pairings: Vec<EdgePairing>,
    pub vertex_classes: Vec<Vec<Corner>>,
    /// Cone angle in radians per vertex class.
    pub cone_angles: Vec<f64>,
    pub edges: Vec<GluedEdge>,
    pub euler_char: i64,
    pub total_area: f64,
}

impl GluedSurface {
    pub fn vertex_count(&self) -> usize {
        self.vertex_classes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.pairings.len()
    }

    pub fn face_count(&self) -> usize {
        self.triangles.len()
    }

    /// Area predicted by Gauss–Bonnet, 2π(χ + Σ(θᵥ − 1)) with θᵥ = angle/2π.
    pub fn gauss_bonnet_area(&self) -> f64 {
        let defect: f64 = self.cone_angles.iter().map(|a| a / (2.0 * PI) - 1.0).sum();
        2.0 * PI * (self.euler_char as f64 + defect)
    }

    pub fn gauss_bonnet_residual(&self) -> f64 {
        (self.total_area - self.gauss_bonnet_area()).abs()
    }

    pub fn gauss_bonnet_ok(&self, tolerance: f64) -> bool {
        self.gauss_bonnet_residual() < tolerance * self.total_area.max(1.0)
    }

    pub fn is_singular(&self, class: usize, tolerance: f64) -> bool {
        (self.cone_angles[class] - 2.0 * PI).abs() > tolerance
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so class order is deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn corner_index(c: Corner) -> usize {
    3 * c.triangle + c.corner
}

/// Validate and assemble from already-built triangles.
pub fn assemble(
    triangle_ids: Vec<String>,
    triangles: Vec<SphericalTriangle>,
    pairings: Vec<EdgePairing>,
    tolerance: f64,
) -> Result<GluedSurface, GlueError> {
    let mut uses = vec![0usize; 3 * triangles.len()];
    for p in &pairings {
        for s in [p.a, p.b] {
            if s.triangle >= triangles.len() {
                return Err(GlueError::UnknownTriangle(format!("#{}", s.triangle)));
            }
            if s.slot > 2 {
                return Err(GlueError::SlotOutOfRange {
                    triangle: triangle_ids[s.triangle].clone(),
                    slot: s.slot,
                });
            }
            uses[3 * s.triangle + s.slot] += 1;
        }
    }
    if let Some((i, &count)) = uses.iter().enumerate().find(|(_, &c)| c != 1) {
        return Err(GlueError::UnmatchedEdge {
            triangle: triangle_ids[i / 3].clone(),
            slot: i % 3,
            count,
        });
    }

    for p in &pairings {
        let la = triangles[p.a.triangle].sides[p.a.slot];
        let lb = triangles[p.b.triangle].sides[p.b.slot];
        if (la - lb).abs() > tolerance * la.max(lb).max(1.0) {
            return Err(GlueError::LengthMismatch {
                a_triangle: triangle_ids[p.a.triangle].clone(),
                a_slot: p.a.slot,
                a_length: la,
                b_triangle: triangle_ids[p.b.triangle].clone(),
                b_slot: p.b.slot,
                b_length: lb,
            });
        }
    }

    let mut sets = DisjointSet::new(3 * triangles.len());
    for p in &pairings {
        let (b_start, b_end) = if p.reversed {
            (p.b.end(), p.b.start())
        } else {
            (p.b.start(), p.b.end())
        };
        sets.union(corner_index(p.a.start()), corner_index(b_start));
        sets.union(corner_index(p.a.end()), corner_index(b_end));
    }

    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut vertex_classes: Vec<Vec<Corner>> = Vec::new();
    let mut class_of_corner = vec![0usize; 3 * triangles.len()];
    for (t, _) in triangles.iter().enumerate() {
        for k in 0..3 {
            let corner = Corner { triangle: t, corner: k };
            let root = sets.find(corner_index(corner));
            let class = *class_of_root.entry(root).or_insert_with(|| {
                vertex_classes.push(Vec::new());
                vertex_classes.len() - 1
            });
            vertex_classes[class].push(corner);
            class_of_corner[corner_index(corner)] = class;
        }
    }

    let cone_angles: Vec<f64> = vertex_classes
        .iter()
        .map(|corners| corners.iter().map(|c| triangles[c.triangle].angles[c.corner]).sum())
        .collect();

    let edges: Vec<GluedEdge> = pairings
        .iter()
        .map(|p| GluedEdge {
            from: class_of_corner[corner_index(p.a.start())],
            to: class_of_corner[corner_index(p.a.end())],
            length: triangles[p.a.triangle].sides[p.a.slot],
        })
        .collect();

    let euler_char = vertex_classes.len() as i64 - pairings.len() as i64 + triangles.len() as i64;
    let total_area = triangles.iter().map(SphericalTriangle::area).sum();

    Ok(GluedSurface {
        triangle_ids,
        triangles,
        pairings,
        vertex_classes,
        cone_angles,
        edges,
        euler_char,
        total_area,
    })
}

/// Build a surface from a gluing description.
pub fn glue_surface(desc: &GluingDescription, tolerance: f64) -> Result<GluedSurface, GlueError> {
    let mut index_of: HashMap<&str, usize> = HashMap::new();
    let mut ids = Vec::with_capacity(desc.triangles.len());
    let mut triangles = Vec::with_capacity(desc.triangles.len());
    for spec in &desc.triangles {
        if index_of.insert(spec.id.as_str(), ids.len()).is_some() {
            return Err(GlueError::DuplicateTriangle(spec.id.clone()));
        }
        let t = triangle_from_pi_multiples(&spec.angles_pi).map_err(|source| GlueError::InvalidTriangle {
            id: spec.id.clone(),
            source,
        })?;
        ids.push(spec.id.clone());
        triangles.push(t);
    }
    let slot = |(id, slot): &(String, usize)| -> Result<EdgeSlot, GlueError> {
        let triangle = *index_of
            .get(id.as_str())
            .ok_or_else(|| GlueError::UnknownTriangle(id.clone()))?;
        Ok(EdgeSlot { triangle, slot: *slot })
    };
    let pairings = desc
        .pairings
        .iter()
        .map(|p| {
            Ok(EdgePairing {
                a: slot(&p.a)?,
                b: slot(&p.b)?,
                reversed: p.reversed,
            })
        })
        .collect::<Result<Vec<_>, GlueError>>()?;
    assemble(ids, triangles, pairings, tolerance)
}

/// Two mirror copies of `t` glued along corresponding edges.
pub fn double_of_triangle(t: &SphericalTriangle) -> GluedSurface {
    let pairings = (0..3)
        .map(|slot| EdgePairing {
            a: EdgeSlot { triangle: 0, slot },
            b: EdgeSlot { triangle: 1, slot },
            reversed: false,
        })
        .collect();
    assemble(
        vec!["front".into(), "back".into()],
        vec![*t, *t],
        pairings,
        DEFAULT_TOLERANCE,
    )
    .expect("a triangle and its mirror always glue")
}

fn right_angles() -> [RationalScalar; 3] {
    [RationalScalar::half(), RationalScalar::half(), RationalScalar::half()]
}

/// The double of the octant triangle as an explicit description.
pub fn octant_double_description() -> GluingDescription {
    GluingDescription {
        triangles: ["front", "back"]
            .map(|id| TriangleSpec {
                id: id.into(),
                angles_pi: right_angles(),
            })
            .to_vec(),
        pairings: (0..3)
            .map(|slot| PairingSpec {
                a: ("front".into(), slot),
                b: ("back".into(), slot),
                reversed: false,
            })
            .collect(),
    }
}

/// Upper hemisphere cut into four octants around the pole, with boundary
/// arcs a = x₁x₂ identified with c = x₃x₄ and b = x₂x₃ with d = x₄x₁.
///
/// Triangle `qk` has corner 0 at the pole and corners 1, 2 at the boundary
/// points xₖ, xₖ₊₁, so slot 0 is the boundary arc and slots 1, 2 are the
/// meridians to xₖ₊₁ and xₖ.
pub fn torus_example_description() -> GluingDescription {
    let ids = ["q1", "q2", "q3", "q4"];
    let mut pairings: Vec<PairingSpec> = (0..4)
        .map(|k| PairingSpec {
            a: (ids[k].into(), 1),
            b: (ids[(k + 1) % 4].into(), 2),
            reversed: true,
        })
        .collect();
    // x₁→x₂ against x₄→x₃, and x₂→x₃ against x₁→x₄
    pairings.push(PairingSpec {
        a: ("q1".into(), 0),
        b: ("q3".into(), 0),
        reversed: true,
    });
    pairings.push(PairingSpec {
        a: ("q2".into(), 0),
        b: ("q4".into(), 0),
        reversed: true,
    });
    GluingDescription {
        triangles: ids
            .map(|id| TriangleSpec {
                id: id.into(),
                angles_pi: right_angles(),
            })
            .to_vec(),
        pairings,
    }
}

pub fn torus_example() -> GluedSurface {
    glue_surface(&torus_example_description(), DEFAULT_TOLERANCE).expect("torus fixture is well formed")
}

pub fn octant_double() -> GluedSurface {
    glue_surface(&octant_double_description(), DEFAULT_TOLERANCE).expect("octant fixture is well formed")
}
