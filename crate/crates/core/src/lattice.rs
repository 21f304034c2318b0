//! ℓ¹ distance from a rational point to the odd lattice ℤⁿₒ.
//!
//! ℤⁿₒ is the set of integer points whose coordinate sum is odd (equivalently
//! whose ℓ¹ norm is odd). The fast path rounds every coordinate and, when the
//! rounded point has even sum, pays the cheapest single-coordinate parity
//! flip. [`nearest_odd_bruteforce`] enumerates a box around the point and is
//! kept as an independent oracle.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::rational::{is_odd, RationalScalar};

/// Largest dimension accepted by the enumeration oracle.
pub const BRUTEFORCE_MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("distance to the odd lattice needs at least one coordinate")]
    EmptyVector,
    #[error("brute-force enumeration supports n ≤ {BRUTEFORCE_MAX_DIM}, got n = {0}")]
    DimensionTooLarge(usize),
}

/// Distance d₁(ℤⁿₒ, v) with a witness point attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeResult {
    pub distance: RationalScalar,
    pub witness: Vec<BigInt>,
    pub per_coordinate_cost: Vec<RationalScalar>,
}

impl LatticeResult {
    /// Rebuild a result from a point and a witness, recomputing the costs.
    pub fn from_witness(v: &[RationalScalar], witness: Vec<BigInt>) -> Self {
        let per_coordinate_cost: Vec<RationalScalar> = v
            .iter()
            .zip(&witness)
            .map(|(vi, wi)| (vi - &RationalScalar::from_integer(wi.clone())).abs())
            .collect();
        let distance = per_coordinate_cost.iter().sum();
        Self {
            distance,
            witness,
            per_coordinate_cost,
        }
    }

    /// Witness has odd coordinate sum and its ℓ¹ cost to `v` equals `distance`.
    pub fn is_valid_for(&self, v: &[RationalScalar]) -> bool {
        if self.witness.len() != v.len() || self.per_coordinate_cost.len() != v.len() {
            return false;
        }
        let sum: BigInt = self.witness.iter().sum();
        let recomputed = Self::from_witness(v, self.witness.clone());
        is_odd(&sum) && recomputed.per_coordinate_cost == self.per_coordinate_cost && recomputed.distance == self.distance
    }
}

/// Exact d₁(ℤⁿₒ, v) by rounding plus a cheapest parity flip.
pub fn nearest_odd(v: &[RationalScalar]) -> Result<LatticeResult, LatticeError> {
    if v.is_empty() {
        return Err(LatticeError::EmptyVector);
    }
    let mut witness = Vec::with_capacity(v.len());
    let mut fractional = Vec::with_capacity(v.len());
    for vi in v {
        let (w, f) = vi.nearest_integer();
        witness.push(w);
        fractional.push(f);
    }
    let sum: BigInt = witness.iter().sum();
    if !is_odd(&sum) {
        // flip cost is 1 − 2fᵢ; the first minimiser wins ties
        let one = RationalScalar::one();
        let two = RationalScalar::from_integer(2);
        let (flip, _) = fractional
            .iter()
            .map(|f| &one - &(&two * f))
            .enumerate()
            .fold(None::<(usize, RationalScalar)>, |best, (i, cost)| match best {
                Some((_, ref b)) if *b <= cost => best,
                _ => Some((i, cost)),
            })
            .expect("non-empty vector");
        let w = &witness[flip];
        let w_q = RationalScalar::from_integer(w.clone());
        witness[flip] = if v[flip] >= w_q { w + 1 } else { w - 1 };
    }
    Ok(LatticeResult::from_witness(v, witness))
}

/// Exhaustive search over the box ⌊vᵢ⌋−1 ≤ wᵢ ≤ ⌈vᵢ⌉+1.
///
/// Returns the lexicographically least minimiser.
pub fn nearest_odd_bruteforce(v: &[RationalScalar]) -> Result<LatticeResult, LatticeError> {
    if v.is_empty() {
        return Err(LatticeError::EmptyVector);
    }
    if v.len() > BRUTEFORCE_MAX_DIM {
        return Err(LatticeError::DimensionTooLarge(v.len()));
    }
    // Costs |v_i - w| over a common denominator, so each box point is an integer sum.
    let denominator = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let candidates: Vec<Vec<(BigInt, BigInt)>> = v
        .iter()
        .map(|x| {
            let scaled: BigInt = x.numer() * &denominator / x.denom();
            let (mut w, hi): (BigInt, BigInt) = (x.floor() - 1, x.ceil() + 1);
            let mut column = Vec::new();
            while w <= hi {
                let cost = (&scaled - &w * &denominator).abs();
                column.push((w.clone(), cost));
                w += 1;
            }
            column
        })
        .collect();
    let mut index = vec![0usize; v.len()];
    let mut best: Option<(BigInt, Vec<usize>)> = None;

    loop {
        let parity_odd = index.iter().zip(&candidates).filter(|(&i, c)| is_odd(&c[i].0)).count() % 2 == 1;
        if parity_odd {
            let cost: BigInt = index.iter().zip(&candidates).map(|(&i, c)| &c[i].1).sum();
            // enumeration is lexicographic, so strict improvement keeps the least witness
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, index.clone()));
            }
        }
        // odometer increment, last coordinate fastest
        let mut axis = index.len();
        loop {
            if axis == 0 {
                let (_, choice) = best.expect("box always contains an odd point");
                let witness = choice.iter().zip(&candidates).map(|(&i, c)| c[i].0.clone()).collect();
                return Ok(LatticeResult::from_witness(v, witness));
            }
            axis -= 1;
            if index[axis] + 1 < candidates[axis].len() {
                index[axis] += 1;
                break;
            }
            index[axis] = 0;
        }
    }
}

/// Exact comparison of the distance against 1.
pub fn compare_distance_to_one(r: &LatticeResult) -> Ordering {
    r.distance.cmp(&RationalScalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> RationalScalar {
        RationalScalar::new(n, d)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fast_path_examples() {
        let r = nearest_odd(&[q(0, 1), q(0, 1), q(0, 1)]).unwrap();
        assert_eq!((r.distance.clone(), r.witness.clone()), (q(1, 1), ints(&[1, 0, 0])));

        let r = nearest_odd(&[q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        assert_eq!((r.distance.clone(), r.witness.clone()), (q(1, 1), ints(&[1, 0, 0])));

        let r = nearest_odd(&[q(1, 5), q(1, 5), q(1, 5)]).unwrap();
        assert_eq!((r.distance.clone(), r.witness.clone()), (q(6, 5), ints(&[1, 0, 0])));

        // (1, 1, 2) has even sum, so it is one unit step away from ℤ³ₒ
        let r = nearest_odd(&[q(1, 1), q(1, 1), q(2, 1)]).unwrap();
        assert_eq!((r.distance.clone(), r.witness.clone()), (q(1, 1), ints(&[2, 1, 2])));

        let r = nearest_odd(&[q(1, 1), q(1, 1), q(1, 1)]).unwrap();
        assert_eq!((r.distance.clone(), r.witness.clone()), (q(0, 1), ints(&[1, 1, 1])));

        assert_eq!(nearest_odd(&[]), Err(LatticeError::EmptyVector));
    }

    #[test]
    fn flip_direction_follows_the_point() {
        // (-1/5, 0): base (0, 0), cheapest flip is the first coordinate towards -1.
        let r = nearest_odd(&[q(-1, 5), q(0, 1)]).unwrap();
        assert_eq!(r.witness, ints(&[-1, 0]));
        assert_eq!(r.distance, q(4, 5));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(nearest_odd_bruteforce(&vec![q(0, 1); 3]).unwrap().distance, q(1, 1));
        let r = nearest_odd_bruteforce(&[q(1, 2), q(1, 4), q(1, 4)]).unwrap();
        assert_eq!(r.distance, q(1, 1));
        assert_eq!(nearest_odd_bruteforce(&[q(1, 2), q(-3, 2), q(5, 2), q(1, 2)]).unwrap().distance, q(2, 1));
        assert_eq!(nearest_odd_bruteforce(&vec![q(1, 5); 3]).unwrap().distance, q(6, 5));
        assert_eq!(
            nearest_odd_bruteforce(&vec![q(0, 1); 9]),
            Err(LatticeError::DimensionTooLarge(9))
        );
        assert_eq!(nearest_odd_bruteforce(&[]), Err(LatticeError::EmptyVector));
    }

    #[test]
    fn bruteforce_witness_is_lexicographically_least() {
        // minimisers of the origin in ℤ²ₒ: (±1, 0), (0, ±1); least is (-1, 0)
        let r = nearest_odd_bruteforce(&[q(0, 1), q(0, 1)]).unwrap();
        assert_eq!(r.witness, ints(&[-1, 0]));
    }

    #[test]
    fn compare_examples() {
        let with = |d: RationalScalar| LatticeResult {
            distance: d,
            witness: vec![],
            per_coordinate_cost: vec![],
        };
        assert_eq!(compare_distance_to_one(&with(q(3, 2))), Ordering::Greater);
        assert_eq!(compare_distance_to_one(&with(q(1, 1))), Ordering::Equal);
        assert_eq!(compare_distance_to_one(&with(q(0, 1))), Ordering::Less);
    }

    fn rational_vec(max_len: usize) -> impl Strategy<Value = Vec<RationalScalar>> {
        prop::collection::vec((-300i64..300, 1i64..60).prop_map(|(n, d)| q(n, d)), 1..=max_len)
    }

    proptest! {
        #[test]
        fn integer_inputs(v in prop::collection::vec(-50i64..50, 1..7)) {
            let point: Vec<RationalScalar> = v.iter().map(|&x| q(x, 1)).collect();
            let expected = if v.iter().sum::<i64>().rem_euclid(2) == 1 { q(0, 1) } else { q(1, 1) };
            prop_assert_eq!(nearest_odd(&point).unwrap().distance, expected);
        }

        #[test]
        fn half_integer_short_circuit(mut v in rational_vec(6), k in 0usize..6, h in -20i64..20) {
            let k = k % v.len();
            v[k] = q(2 * h + 1, 2);
            let r = nearest_odd(&v).unwrap();
            let base: RationalScalar = v.iter().map(|x| x.nearest_integer().1).sum();
            prop_assert_eq!(r.distance, base);
        }

        #[test]
        fn witness_is_valid(v in rational_vec(7)) {
            let r = nearest_odd(&v).unwrap();
            prop_assert!(r.is_valid_for(&v));
            prop_assert!(!r.distance.is_negative());
        }

        #[test]
        fn matches_oracle(v in rational_vec(5)) {
            let fast = nearest_odd(&v).unwrap();
            let slow = nearest_odd_bruteforce(&v).unwrap();
            prop_assert_eq!(&fast.distance, &slow.distance);
            prop_assert!(slow.is_valid_for(&v));
        }
    }
}
