//! Mixed norms `‖x‖ = (Σ_i ‖x_i‖_p^q)^{1/q}` on `(Σ_i ℓ_p)_q`.
//!
//! Vectors live on the interleaved scheme: index `(i, n)` is coordinate `n`
//! of block `i`.

use std::collections::BTreeMap;

use jsm_core::{FinVec, Index, IndexScheme, Q};
use num_traits::{One, Signed, Zero};

use crate::error::SpaceError;

#[derive(Clone, Debug, PartialEq)]
pub struct MixedNorm {
    pub value: f64,
    /// Bound on `|value − ‖x‖| / ‖x‖`.
    pub rel_error: f64,
    /// Set when the norm is rational and was computed exactly.
    pub exact: Option<Q>,
}

fn exponent(p: &Q) -> Result<f64, SpaceError> {
    if *p < Q::one() {
        return Err(SpaceError::Exponent(jsm_core::num::fmt_rational(p)));
    }
    Ok(jsm_core::num::to_f64(p))
}

/// Blocks of absolute coefficients in block order.
pub fn blocks_of(x: &FinVec) -> Result<Vec<Vec<f64>>, SpaceError> {
    if !matches!(x.scheme(), IndexScheme::Interleaved(_)) {
        return Err(SpaceError::Scheme { expected: "interleaved", got: x.scheme().to_string() });
    }
    let mut blocks: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for (idx, c) in x.iter() {
        let Index::Pair { i, .. } = idx else { unreachable!("validated by scheme") };
        blocks.entry(*i).or_default().push(jsm_core::num::to_f64(&c.abs()));
    }
    Ok(blocks.into_values().collect())
}

/// Power sum `(Σ a^p)^{1/p}` scaled by the maximum to avoid overflow.
pub fn lp(a: &[f64], p: f64) -> f64 {
    let m = a.iter().cloned().fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    m * a.iter().map(|v| (v / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn pq_norm_f64(blocks: &[Vec<f64>], p: f64, q: f64) -> f64 {
    let norms: Vec<f64> = blocks.iter().map(|b| lp(b, p)).collect();
    lp(&norms, q)
}

/// Same quantity through logarithms, as an independent cross-check.
pub fn pq_norm_logsum(blocks: &[Vec<f64>], p: f64, q: f64) -> f64 {
    fn log_lp(logs: &[f64], p: f64) -> f64 {
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + logs.iter().map(|l| (p * (l - m)).exp()).sum::<f64>().ln() / p
    }
    let logs: Vec<f64> = blocks
        .iter()
        .map(|b| log_lp(&b.iter().filter(|v| **v > 0.0).map(|v| v.ln()).collect::<Vec<_>>(), p))
        .filter(|l| l.is_finite())
        .collect();
    log_lp(&logs, q).exp()
}

pub fn mixed_pq_norm(x: &FinVec, p: &Q, q: &Q) -> Result<MixedNorm, SpaceError> {
    let (pf, qf) = (exponent(p)?, exponent(q)?);
    let blocks = blocks_of(x)?;
    let exact = if p.is_one() && q.is_one() {
        Some(x.l1())
    } else if *p == Q::from_integer(2.into()) && *q == *p {
        jsm_core::num::sqrt_exact(&x.l2_sq())
    } else if x.is_empty() {
        Some(Q::zero())
    } else {
        None
    };
    let value = match &exact {
        Some(v) => jsm_core::num::to_f64(v),
        None => pq_norm_f64(&blocks, pf, qf),
    };
    // Each power, sum and root contributes a few ulps per term.
    let terms = x.len().max(1) as f64;
    let rel_error = if exact.is_some() { 0.0 } else { 8.0 * (terms + 4.0) * f64::EPSILON };
    Ok(MixedNorm { value, rel_error, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use jsm_core::{q, qi};

    fn v(entries: &[(u32, u64, Q)]) -> FinVec {
        FinVec::from_entries(IndexScheme::Interleaved(4), entries.iter().map(|(i, n, c)| (Index::pair(*i, *n), c.clone()))).unwrap()
    }

    #[test]
    fn exact_cases() {
        let x = v(&[(1, 1, qi(3)), (2, 1, qi(-4)), (2, 5, q(1, 2))]);
        assert_eq!(mixed_pq_norm(&x, &qi(1), &qi(1)).unwrap().exact, Some(q(15, 2)));
        let y = v(&[(1, 1, qi(3)), (2, 1, qi(-4))]);
        assert_eq!(mixed_pq_norm(&y, &qi(2), &qi(2)).unwrap().exact, Some(qi(5)));
    }

    #[test]
    fn two_unit_blocks() {
        let x = v(&[(1, 1, qi(1)), (2, 1, qi(1))]);
        let r = mixed_pq_norm(&x, &q(3, 2), &qi(3)).unwrap();
        assert!((r.value - 2f64.powf(1.0 / 3.0)).abs() <= r.rel_error * r.value);
        let b = blocks_of(&x).unwrap();
        assert!((pq_norm_logsum(&b, 1.5, 3.0) - r.value).abs() < 1e-13);
    }

    #[test]
    fn bad_exponent() {
        assert!(mixed_pq_norm(&v(&[(1, 1, qi(1))]), &q(1, 2), &qi(2)).is_err());
    }
}
