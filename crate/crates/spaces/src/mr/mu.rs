//! The weight sequence `μ_j = m_j²`.

use std::sync::Mutex;

use jsm_core::Q;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::error::SpaceError;

/// Largest weight index whose `m_j` will be materialised.
pub const MAX_INDEX: u64 = 5000;
/// Largest bit length of a materialised `μ_j`.
pub const MAX_BITS: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuRule {
    /// `m_j = (2^{j-1} (j-1)!)²`, so `m_{j+1}/m_j = 4j²`.
    Factorial,
    /// `m_j = 4^(2^j)`. Grows too fast to host any special sequence of
    /// length two: the second weight index already exceeds `μ_1 = 256`.
    Tower,
}

impl MuRule {
    pub fn name(self) -> &'static str {
        match self {
            MuRule::Factorial => "factorial",
            MuRule::Tower => "tower",
        }
    }

    pub fn parse(s: &str) -> Option<MuRule> {
        match s {
            "factorial" => Some(MuRule::Factorial),
            "tower" => Some(MuRule::Tower),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub struct MuSequence {
    rule: MuRule,
    cache: Mutex<Vec<BigUint>>,
}

impl Clone for MuSequence {
    fn clone(&self) -> Self {
        MuSequence::new(self.rule)
    }
}

impl Default for MuSequence {
    fn default() -> Self {
        MuSequence::new(MuRule::Factorial)
    }
}

/// Certificate for `Σ_i Σ_{j>i} m_i/m_j ≤ 1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuCertificate {
    pub prefix_terms: u64,
    pub prefix: Q,
    pub tail: Q,
    pub total: Q,
    pub holds: bool,
}

impl MuSequence {
    pub fn new(rule: MuRule) -> MuSequence {
        MuSequence { rule, cache: Mutex::new(Vec::new()) }
    }

    pub fn rule(&self) -> MuRule {
        self.rule
    }

    /// Bit length of `m_j` without computing it (an upper estimate).
    fn m_bits_estimate(&self, j: u64) -> u64 {
        match self.rule {
            MuRule::Factorial => 2 * (j + j * (64 - j.leading_zeros() as u64)),
            MuRule::Tower => 1u64.checked_shl((j + 1).min(63) as u32).unwrap_or(u64::MAX),
        }
    }

    pub fn m(&self, j: u64) -> Result<BigUint, SpaceError> {
        if j == 0 {
            return Err(SpaceError::Budget("0".into()));
        }
        if j > MAX_INDEX || self.m_bits_estimate(j) > MAX_BITS / 2 {
            return Err(SpaceError::Budget(j.to_string()));
        }
        match self.rule {
            MuRule::Tower => Ok(BigUint::one() << (2u64 << j)),
            MuRule::Factorial => {
                let mut cache = self.cache.lock().expect("mu cache");
                if cache.is_empty() {
                    cache.push(BigUint::one());
                }
                // cache[t] = 2^t t!, so m_j = cache[j-1]².
                while cache.len() < j as usize {
                    let t = cache.len() as u64;
                    let next = &cache[t as usize - 1] * BigUint::from(2 * t);
                    cache.push(next);
                }
                let r = &cache[j as usize - 1];
                Ok(r * r)
            }
        }
    }

    pub fn mu(&self, j: u64) -> Result<BigUint, SpaceError> {
        let m = self.m(j)?;
        Ok(&m * &m)
    }

    /// Same as [`m`](Self::m) for a weight index given as a big integer.
    pub fn m_big(&self, j: &BigUint) -> Result<BigUint, SpaceError> {
        let small = j.to_u64().ok_or_else(|| SpaceError::Budget(j.to_string()))?;
        self.m(small)
    }

    /// The `j` with `μ_j = size`, if any.
    pub fn index_of_size(&self, size: &BigUint) -> Option<u64> {
        let mut j = 1;
        loop {
            let mu = self.mu(j).ok()?;
            if &mu == size {
                return Some(j);
            }
            if &mu > size {
                return None;
            }
            j += 1;
        }
    }

    /// Smallest `j` with `μ_j ≥ size`.
    pub fn first_at_least(&self, size: &BigUint) -> Result<u64, SpaceError> {
        let mut j = 1;
        while &self.mu(j)? < size {
            j += 1;
        }
        Ok(j)
    }

    /// `m_{j+1}/m_j`.
    pub fn ratio(&self, j: u64) -> Q {
        match self.rule {
            MuRule::Factorial => Q::from_integer(BigInt::from(4u64 * j * j)),
            MuRule::Tower => Q::from_integer(BigInt::one() << (2u64 << j)),
        }
    }

    /// Upper bound for `Σ_{i>p} m_i/m_{i+1}`.
    pub fn inverse_ratio_tail(&self, p: u64) -> Q {
        match self.rule {
            // Σ_{i>p} 1/(4i²) ≤ 1/(4p).
            MuRule::Factorial => Q::new(BigInt::one(), BigInt::from(4 * p.max(1))),
            // Each term is at most the square of the previous one.
            MuRule::Tower => Q::from_integer(2.into()) / self.ratio(p + 1),
        }
    }

    /// Upper bound for `Σ_{t>w} m_w/m_t`, valid because the ratios increase.
    pub fn upper_tail_from(&self, w: u64) -> Q {
        let r1 = self.ratio(w + 1);
        (Q::one() / self.ratio(w)) * &r1 / (&r1 - Q::one())
    }

    /// Certified bound using the first `p` rows exactly, each row's geometric
    /// tail, and a tail over rows beyond `p`.
    pub fn certificate(&self, p: u64) -> MuCertificate {
        let mut prefix = Q::from_integer(0.into());
        for i in 1..=p {
            prefix += self.upper_tail_from(i);
        }
        let r = self.ratio(p + 1);
        let tail = self.inverse_ratio_tail(p) * &r / (&r - Q::one());
        let total = &prefix + &tail;
        let holds = total <= Q::new(1.into(), 2.into());
        MuCertificate { prefix_terms: p, prefix, tail, total, holds }
    }

    /// `min(m_a, m_b) / max(m_a, m_b)`.
    pub fn cross(&self, a: u64, b: u64) -> Result<Q, SpaceError> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Ok(Q::new(self.m(lo)?.into(), self.m(hi)?.into()))
    }

    /// Upper bound on `Σ_{t≠w} min(m_t,m_w)/max(m_t,m_w)` over all t ≥ 1.
    pub fn cross_total(&self, w: u64) -> Result<Q, SpaceError> {
        let mw = BigInt::from(self.m(w)?);
        let mut below = BigInt::from(0);
        for t in 1..w {
            below += BigInt::from(self.m(t)?);
        }
        Ok(Q::new(below, mw) + self.upper_tail_from(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_values() {
        let mu = MuSequence::default();
        let ms: Vec<u64> = (1..=4).map(|j| mu.m(j).unwrap().to_u64().unwrap()).collect();
        assert_eq!(ms, vec![1, 4, 64, 2304]);
        for j in 1..8 {
            assert_eq!(Q::new(mu.m(j + 1).unwrap().into(), mu.m(j).unwrap().into()), mu.ratio(j));
        }
        assert_eq!(mu.index_of_size(&BigUint::from(16u32)), Some(2));
        assert_eq!(mu.index_of_size(&BigUint::from(17u32)), None);
        assert_eq!(mu.first_at_least(&BigUint::from(17u32)).unwrap(), 3);
    }

    #[test]
    fn certificates() {
        let c = MuSequence::default().certificate(20);
        assert!(c.holds, "{c:?}");
        assert!(c.total > Q::new(2.into(), 5.into()));
        let t = MuSequence::new(MuRule::Tower);
        assert!(t.certificate(4).holds);
        assert_eq!(t.m(1).unwrap(), BigUint::from(16u32));
        assert!(t.m(40).is_err());
    }
}
