use jsm_core::rle::Run;
use jsm_core::{Line, Q, RleVec};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use super::mu::MuSequence;
use super::registry::{is_successive, parse_prefix_key, LineSet, SigmaRegistry};
use crate::error::SpaceError;

/// Pairs `(E¹_k, E²_k)` with `#E^i_k = μ_{j_k}` and `j_k = σ(prefix)` for
/// `k > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSequence {
    pub pairs: Vec<(LineSet, LineSet)>,
    pub weights: Vec<u64>,
}

impl SpecialSequence {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn flat(&self) -> Vec<LineSet> {
        self.pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
    }

    /// Reads a registry key back as a special sequence, checking every
    /// defining condition against `reg`. Returns `None` when it is not one.
    pub fn from_key(key: &str, mu: &MuSequence, reg: &SigmaRegistry) -> Option<SpecialSequence> {
        let sets = parse_prefix_key(key)?;
        if sets.len() % 2 != 0 || !is_successive(&sets) {
            return None;
        }
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for (k, ch) in sets.chunks(2).enumerate() {
            let (a, b) = (&ch[0], &ch[1]);
            if a.line != Line::N1 || b.line != Line::N2 || a.len != b.len {
                return None;
            }
            let j = mu.index_of_size(&a.len)?;
            if k > 0 {
                let sigma = reg.get(&sets[..2 * k])?;
                if sigma.to_u64() != Some(j) {
                    return None;
                }
            }
            pairs.push((a.clone(), b.clone()));
            weights.push(j);
        }
        Some(SpecialSequence { pairs, weights })
    }
}

/// The two test vectors of a special sequence: the plain sum of the
/// normalised block indicators and the sum with signs `(-1)^i`.
#[derive(Clone, Debug)]
pub struct SpecialVectors {
    pub plus: RleVec,
    pub alternating: RleVec,
    pub seq: SpecialSequence,
}

/// Lays out the canonical special sequence of length `n`: `E¹_1 = {1}`,
/// `E²_1 = {2}`, then each set starts right after the previous one in the
/// natural order. Every prefix and the full sequence are registered, so
/// shorter builds are prefixes of longer ones.
pub fn build_special_vectors(n: usize, mu: &MuSequence, reg: &mut SigmaRegistry) -> Result<SpecialVectors, SpaceError> {
    if n == 0 {
        return Err(SpaceError::ZeroLength);
    }
    let mut sets: Vec<LineSet> = Vec::new();
    let mut weights = Vec::new();
    let mut next1 = BigUint::one();
    for k in 0..n {
        let j = if k == 0 {
            1
        } else {
            let s = reg.sigma(&sets)?;
            s.to_u64().ok_or_else(|| SpaceError::Budget(s.to_string()))?
        };
        let size = mu.mu(j)?;
        let e1 = LineSet::new(Line::N1, next1.clone(), size.clone());
        let e2 = LineSet::new(Line::N2, e1.end(), size);
        next1 = e2.end() + 1u32;
        sets.push(e1);
        sets.push(e2);
        weights.push(j);
    }
    reg.sigma(&sets)?;
    let mut plus = Vec::new();
    let mut alt = Vec::new();
    for (k, ch) in sets.chunks(2).enumerate() {
        let c = Q::new(BigInt::one(), mu.m(weights[k])?.into());
        for (i, s) in ch.iter().enumerate() {
            plus.push(Run { line: s.line, start: s.start.clone(), len: s.len.clone(), coeff: c.clone() });
            let signed = if i == 0 { -c.clone() } else { c.clone() };
            alt.push(Run { line: s.line, start: s.start.clone(), len: s.len.clone(), coeff: signed });
        }
    }
    let pairs = sets.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
    Ok(SpecialVectors {
        plus: RleVec::new(plus)?,
        alternating: RleVec::new(alt)?,
        seq: SpecialSequence { pairs, weights },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_layout() {
        let mu = MuSequence::default();
        let mut reg = SigmaRegistry::in_memory();
        let v = build_special_vectors(2, &mu, &mut reg).unwrap();
        assert_eq!(v.seq.weights, vec![1, 2]);
        let (a, b) = &v.seq.pairs[1];
        assert_eq!((a.first_natural(), a.last_natural()), (3u32.into(), 33u32.into()));
        assert_eq!((b.first_natural(), b.last_natural()), (34u32.into(), 64u32.into()));
        assert_eq!(v.plus.runs().len(), 4);
        let w = build_special_vectors(3, &mu, &mut reg).unwrap();
        assert_eq!(&w.seq.pairs[..2], &v.seq.pairs[..]);
        assert_eq!(w.seq.weights[2], 18);
        let key = super::super::registry::prefix_key(&w.seq.flat());
        assert_eq!(SpecialSequence::from_key(&key, &mu, &reg), Some(w.seq.clone()));
    }

    #[test]
    fn single_pair() {
        let mu = MuSequence::default();
        let mut reg = SigmaRegistry::in_memory();
        let v = build_special_vectors(1, &mu, &mut reg).unwrap();
        assert_eq!(v.plus.runs().len(), 2);
        assert_eq!(v.seq.pairs[0].0.len, mu.mu(1).unwrap());
        assert!(build_special_vectors(0, &mu, &mut reg).is_err());
    }
}
