//! Coverage of slots by a convex combination of half-size selectors.

use std::collections::BTreeSet;

use jsm_core::Q;
use num_traits::{One, Signed, Zero};

use crate::error::UalsError;

#[derive(Clone, Debug, PartialEq)]
pub struct SlotCoverage {
    pub slot: u32,
    pub coverage: Q,
}

fn validate(n: u32, sets: &[BTreeSet<u32>], weights: &[Q]) -> Result<(), UalsError> {
    if n == 0 {
        return Err(UalsError::Selector("n must be at least 1".into()));
    }
    if sets.len() != weights.len() || sets.is_empty() {
        return Err(UalsError::Weights(format!("{} sets, {} weights", sets.len(), weights.len())));
    }
    for g in sets {
        if g.len() != n as usize || g.iter().any(|&j| j == 0 || j > 2 * n) {
            return Err(UalsError::Selector(format!("{g:?} is not an {n}-subset of 1..={}", 2 * n)));
        }
    }
    if weights.iter().any(|w| w.is_negative()) || !weights.iter().sum::<Q>().is_one() {
        return Err(UalsError::Weights("not a probability vector".into()));
    }
    Ok(())
}

/// `Σ λᵢ [j ∈ Gᵢ]` for every slot `j = 1..=2n`.
pub fn coverage(n: u32, sets: &[BTreeSet<u32>], weights: &[Q]) -> Result<Vec<Q>, UalsError> {
    validate(n, sets, weights)?;
    let mut cov = vec![Q::zero(); 2 * n as usize];
    for (g, w) in sets.iter().zip(weights) {
        for &j in g {
            cov[j as usize - 1] += w;
        }
    }
    Ok(cov)
}

/// The least slot whose coverage is at most `1/2`. One always exists since
/// the coverages average to exactly `1/2`.
pub fn pigeonhole_witness(n: u32, sets: &[BTreeSet<u32>], weights: &[Q]) -> Result<SlotCoverage, UalsError> {
    let cov = coverage(n, sets, weights)?;
    let half = Q::new(1.into(), 2.into());
    let (j, c) = cov.iter().enumerate().find(|(_, c)| **c <= half).expect("coverages average to 1/2");
    Ok(SlotCoverage { slot: j as u32 + 1, coverage: c.clone() })
}

/// All `n`-subsets of `1..=2n` in colex order.
pub fn half_subsets(n: u32) -> Vec<BTreeSet<u32>> {
    let m = 2 * n;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m) {
        if mask.count_ones() == n {
            out.push((0..m).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use jsm_core::{q, qi};

    fn set(v: &[u32]) -> BTreeSet<u32> {
        v.iter().copied().collect()
    }

    #[test]
    fn single_initial_set() {
        let w = pigeonhole_witness(3, &[set(&[1, 2, 3])], &[qi(1)]).unwrap();
        assert_eq!(w, SlotCoverage { slot: 4, coverage: qi(0) });
    }

    #[test]
    fn uniform_mixture_covers_every_slot_by_half() {
        let sets = half_subsets(2);
        assert_eq!(sets.len(), 6);
        let w = vec![q(1, 6); 6];
        assert_eq!(coverage(2, &sets, &w).unwrap(), vec![q(1, 2); 4]);
        assert_eq!(pigeonhole_witness(2, &sets, &w).unwrap(), SlotCoverage { slot: 1, coverage: q(1, 2) });
    }

    #[test]
    fn odd_slots_leave_two_uncovered() {
        let w = pigeonhole_witness(2, &[set(&[1, 3])], &[qi(1)]).unwrap();
        assert_eq!(w, SlotCoverage { slot: 2, coverage: qi(0) });
    }

    #[test]
    fn malformed_sets_are_rejected() {
        assert!(pigeonhole_witness(2, &[set(&[1, 2, 3])], &[qi(1)]).is_err());
        assert!(pigeonhole_witness(2, &[set(&[1, 5])], &[qi(1)]).is_err());
        assert!(pigeonhole_witness(2, &[set(&[1, 2])], &[q(1, 2)]).is_err());
    }
}
