//! Batch classification and exact-grid region sweeps.
//!
//! With the `parallel` feature (on by default) batches are classified on the
//! rayon pool; otherwise sequentially. Either way the output order matches
//! the input order, so sweeps are deterministic.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::angles::AngleVector;
use crate::classifier::{classify, Certificate};
use crate::rational::RationalScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("a region sweep needs 1 or 2 varying axes, got {0}")]
    AxisCount(usize),
    #[error("axis index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("coordinate {0} is assigned more than once")]
    DuplicateIndex(usize),
    #[error("coordinate {0} is neither fixed nor varying")]
    MissingIndex(usize),
    #[error("axis {index}: step must be positive and min < max (got min {min}, max {max}, step {step})")]
    BadRange {
        index: usize,
        min: String,
        max: String,
        step: String,
    },
    #[error("coordinate {index} takes the non-positive value {value}")]
    NonPositive { index: usize, value: String },
}

/// One varying coordinate; grid values are min + k·step ≤ max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    /// Zero-based coordinate index.
    pub index: usize,
    pub min: RationalScalar,
    pub max: RationalScalar,
    pub step: RationalScalar,
}

impl Axis {
    pub fn values(&self) -> Vec<RationalScalar> {
        let mut out = Vec::new();
        let mut value = self.min.clone();
        while value <= self.max {
            out.push(value.clone());
            value = value + &self.step;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionSweepSpec {
    pub n: usize,
    /// Zero-based index → fixed value.
    pub fixed: BTreeMap<usize, RationalScalar>,
    pub axes: Vec<Axis>,
}

impl RegionSweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if !(1..=2).contains(&self.axes.len()) {
            return Err(SweepError::AxisCount(self.axes.len()));
        }
        let mut seen = vec![false; self.n];
        let indices = self.fixed.keys().copied().chain(self.axes.iter().map(|a| a.index));
        for index in indices {
            if index >= self.n {
                return Err(SweepError::IndexOutOfRange {
                    index: index + 1,
                    n: self.n,
                });
            }
            if std::mem::replace(&mut seen[index], true) {
                return Err(SweepError::DuplicateIndex(index + 1));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(SweepError::MissingIndex(missing + 1));
        }
        for (&index, value) in &self.fixed {
            if !value.is_positive() {
                return Err(SweepError::NonPositive {
                    index: index + 1,
                    value: value.to_string(),
                });
            }
        }
        for axis in &self.axes {
            if !axis.step.is_positive() || axis.min >= axis.max {
                return Err(SweepError::BadRange {
                    index: axis.index + 1,
                    min: axis.min.to_string(),
                    max: axis.max.to_string(),
                    step: axis.step.to_string(),
                });
            }
            if !axis.min.is_positive() {
                return Err(SweepError::NonPositive {
                    index: axis.index + 1,
                    value: axis.min.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Grid points in lexicographic order: the first axis varies slowest.
    pub fn grid(&self) -> Result<Vec<AngleVector>, SweepError> {
        self.validate()?;
        let mut base: Vec<RationalScalar> = vec![RationalScalar::zero(); self.n];
        for (&index, value) in &self.fixed {
            base[index] = value.clone();
        }
        let mut points = vec![base];
        for axis in &self.axes {
            let values = axis.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q[axis.index] = v.clone();
                        q
                    })
                })
                .collect();
        }
        Ok(points
            .into_iter()
            .map(|p| AngleVector::new(p).expect("validated positive"))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    /// Values of the varying coordinates, in axis order.
    pub axis_values: Vec<RationalScalar>,
    pub certificate: Certificate,
}

pub fn classify_batch_sequential(points: &[AngleVector]) -> Vec<Certificate> {
    points.iter().map(classify).collect()
}

#[cfg(feature = "parallel")]
pub fn classify_batch_parallel(points: &[AngleVector]) -> Vec<Certificate> {
    use rayon::prelude::*;
    points.par_iter().map(classify).collect()
}

/// Classify a batch, preserving input order.
pub fn classify_batch(points: &[AngleVector]) -> Vec<Certificate> {
    #[cfg(feature = "parallel")]
    {
        classify_batch_parallel(points)
    }
    #[cfg(not(feature = "parallel"))]
    {
        classify_batch_sequential(points)
    }
}

pub fn run_sweep(spec: &RegionSweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    let points = spec.grid()?;
    let certificates = classify_batch(&points);
    Ok(points
        .iter()
        .zip(certificates)
        .map(|(p, certificate)| SweepRow {
            axis_values: spec.axes.iter().map(|a| p.entries()[a.index].clone()).collect(),
            certificate,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{DecidingRule, Verdict};

    fn q(n: i64, d: i64) -> RationalScalar {
        RationalScalar::new(n, d)
    }

    fn slice_spec() -> RegionSweepSpec {
        let axis = |index| Axis {
            index,
            min: q(1, 10),
            max: q(3, 1),
            step: q(1, 10),
        };
        RegionSweepSpec {
            n: 3,
            fixed: BTreeMap::from([(2, q(1, 2))]),
            axes: vec![axis(0), axis(1)],
        }
    }

    #[test]
    fn thirty_by_thirty_slice() {
        let rows = run_sweep(&slice_spec()).unwrap();
        assert_eq!(rows.len(), 900);
        assert_eq!(rows[0].axis_values, vec![q(1, 10), q(1, 10)]);
        assert_eq!(rows[1].axis_values, vec![q(1, 10), q(1, 5)]);
        assert_eq!(rows[899].axis_values, vec![q(3, 1), q(3, 1)]);
        for row in &rows {
            let c = &row.certificate;
            if !c.chi.is_positive() {
                assert_eq!(c.rule, DecidingRule::PositivityViolated);
            }
        }
    }

    #[test]
    fn exact_grid_hits_the_equality_stratum() {
        let axis = |index, lo: (i64, i64), hi: (i64, i64)| Axis {
            index,
            min: q(lo.0, lo.1),
            max: q(hi.0, hi.1),
            step: q(1, 20),
        };
        let spec = RegionSweepSpec {
            n: 3,
            fixed: BTreeMap::from([(2, q(5, 4))]),
            axes: vec![axis(0, (1, 1), (2, 1)), axis(1, (1, 1), (2, 1))],
        };
        let rows = run_sweep(&spec).unwrap();
        let hit = rows
            .iter()
            .find(|r| r.axis_values == vec![q(3, 2), q(5, 4)])
            .expect("grid contains (3/2, 5/4)");
        assert_eq!(hit.certificate.rule, DecidingRule::MainTheoremNonIntegral);
        assert_eq!(hit.certificate.verdict, Verdict::NotAdmissible);
    }

    #[test]
    fn sequential_and_default_agree() {
        let points = slice_spec().grid().unwrap();
        assert_eq!(classify_batch_sequential(&points), classify_batch(&points));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = slice_spec();
        spec.axes.push(Axis {
            index: 2,
            min: q(1, 1),
            max: q(2, 1),
            step: q(1, 1),
        });
        assert_eq!(spec.validate(), Err(SweepError::AxisCount(3)));

        let mut spec = slice_spec();
        spec.fixed.clear();
        assert_eq!(spec.validate(), Err(SweepError::MissingIndex(3)));

        let mut spec = slice_spec();
        spec.fixed.insert(0, q(1, 1));
        assert_eq!(spec.validate(), Err(SweepError::DuplicateIndex(1)));

        let mut spec = slice_spec();
        spec.axes[0].step = q(0, 1);
        assert!(matches!(spec.validate(), Err(SweepError::BadRange { index: 1, .. })));

        let mut spec = slice_spec();
        spec.axes[1].min = q(0, 1);
        assert!(matches!(spec.validate(), Err(SweepError::NonPositive { index: 2, .. })));

        let mut spec = slice_spec();
        spec.fixed = BTreeMap::from([(5, q(1, 1))]);
        assert!(matches!(spec.validate(), Err(SweepError::IndexOutOfRange { index: 6, .. })));
    }
}
