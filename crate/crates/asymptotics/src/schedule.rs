use jsm_core::Q;
use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::AsymError;

/// Tolerances `δ_1 > δ_2 > … > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationSchedule {
    deltas: Vec<Q>,
}

impl StabilizationSchedule {
    pub fn new(deltas: Vec<Q>) -> Result<Self, AsymError> {
        if deltas.iter().any(|d| !d.is_positive()) {
            return Err(AsymError::Schedule("tolerances must be positive".into()));
        }
        if deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(AsymError::Schedule("tolerances must strictly decrease".into()));
        }
        Ok(StabilizationSchedule { deltas })
    }

    /// `δ_k = 2^{-k}`.
    pub fn halving(k_max: usize) -> Self {
        StabilizationSchedule { deltas: (1..=k_max).map(|k| Q::new(BigInt::one(), BigInt::one() << k)).collect() }
    }

    /// Comma-separated rationals.
    pub fn parse(s: &str) -> Result<Self, AsymError> {
        let deltas = s
            .split(',')
            .map(|t| jsm_core::num::parse_rational(t.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        StabilizationSchedule::new(deltas)
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// `δ_k` for `k ≥ 1`.
    pub fn delta(&self, k: usize) -> Option<&Q> {
        self.deltas.get(k.checked_sub(1)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jsm_core::q;

    #[test]
    fn validation() {
        assert_eq!(StabilizationSchedule::halving(3).delta(3), Some(&q(1, 8)));
        assert!(StabilizationSchedule::parse("1/2,1/2").is_err());
        assert!(StabilizationSchedule::parse("1/2,0").is_err());
        assert_eq!(StabilizationSchedule::parse("1/3, 1/9").unwrap().len(), 2);
    }
}
