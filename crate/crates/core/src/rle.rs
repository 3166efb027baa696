//! Run-length vectors over the two-line scheme.
//!
//! A position `p` on line N₁ is the natural `2p-1`; on N₂ it is `2p`. Run
//! lengths are unbounded integers, so vectors with astronomically large
//! supports are cheap as long as they are constant on long stretches.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CoreError;
use crate::index::{Index, IndexScheme, Line};
use crate::num::Q;
use crate::vec::FinVec;

/// Largest support `to_finvec` will materialize.
pub const EXPAND_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub line: Line,
    /// First position (1-based) within the line.
    pub start: BigUint,
    pub len: BigUint,
    pub coeff: Q,
}

impl Run {
    pub fn new(line: Line, start: impl Into<BigUint>, len: impl Into<BigUint>, coeff: Q) -> Run {
        Run { line, start: start.into(), len: len.into(), coeff }
    }

    /// Last position covered; meaningless for empty runs.
    pub fn end(&self) -> BigUint {
        &self.start + &self.len - 1u32
    }

    /// Number of positions shared with the inclusive interval `[lo, hi]`.
    pub fn overlap(&self, lo: &BigUint, hi: &BigUint) -> BigUint {
        if self.len.is_zero() || lo > hi {
            return BigUint::zero();
        }
        let a = if &self.start > lo { self.start.clone() } else { lo.clone() };
        let end = self.end();
        let b = if &end < hi { end } else { hi.clone() };
        if a > b {
            BigUint::zero()
        } else {
            b - a + 1u32
        }
    }
}

/// A set of positions inside one line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positions {
    /// Inclusive position range `lo..=hi` on `line`.
    Interval { line: Line, lo: BigUint, hi: BigUint },
    /// The first `n` positions of `line`.
    Count { line: Line, n: BigUint },
    /// Inclusive range of naturals; valid only when it stays inside one line.
    Naturals { lo: u64, hi: u64 },
}

impl Positions {
    /// Resolves to `(line, lo, hi)`; `None` for an empty set.
    pub fn resolve(&self) -> Result<Option<(Line, BigUint, BigUint)>, CoreError> {
        match self {
            Positions::Interval { line, lo, hi } => {
                Ok((lo <= hi && !lo.is_zero()).then(|| (*line, lo.clone(), hi.clone())))
            }
            Positions::Count { line, n } => {
                Ok((!n.is_zero()).then(|| (*line, BigUint::one(), n.clone())))
            }
            Positions::Naturals { lo, hi } => {
                if lo > hi || *lo == 0 {
                    return Ok(None);
                }
                if lo != hi {
                    return Err(CoreError::StraddlesLines);
                }
                let p = BigUint::from((lo + 1) / 2);
                Ok(Some((Line::of(*lo), p.clone(), p)))
            }
        }
    }
}

pub fn natural_of(line: Line, pos: u64) -> u64 {
    match line {
        Line::N1 => 2 * pos - 1,
        Line::N2 => 2 * pos,
    }
}

pub fn position_of(natural: u64) -> (Line, u64) {
    (Line::of(natural), natural.div_ceil(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RleVec {
    runs: Vec<Run>,
}

impl RleVec {
    /// Sorts runs by (line, start), drops empty or zero runs, rejects overlaps.
    pub fn new(mut runs: Vec<Run>) -> Result<RleVec, CoreError> {
        runs.retain(|r| !r.len.is_zero() && !r.coeff.is_zero());
        for r in &runs {
            if r.start.is_zero() {
                return Err(CoreError::Document("run positions start at 1".into()));
            }
        }
        runs.sort_by(|a, b| (a.line, &a.start).cmp(&(b.line, &b.start)));
        for w in runs.windows(2) {
            if w[0].line == w[1].line && w[0].end() >= w[1].start {
                return Err(CoreError::OverlappingRuns(w[0].line.number()));
            }
        }
        Ok(RleVec { runs })
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn line_runs(&self, line: Line) -> impl Iterator<Item = &Run> {
        self.runs.iter().filter(move |r| r.line == line)
    }

    pub fn support_size(&self) -> BigUint {
        self.runs.iter().map(|r| r.len.clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.runs.is_empty()
    }

    /// Last occupied position on `line`, zero if the line is empty.
    pub fn line_extent(&self, line: Line) -> BigUint {
        self.line_runs(line).map(|r| r.end()).max().unwrap_or_default()
    }

    /// Exact coefficient sum over `pos`, computed from run overlaps.
    pub fn restrict_sum(&self, pos: &Positions) -> Result<Q, CoreError> {
        let Some((line, lo, hi)) = pos.resolve()? else {
            return Ok(Q::zero());
        };
        Ok(self.interval_sum(line, &lo, &hi, false))
    }

    /// Sum of `|coeff|` over `pos`.
    pub fn restrict_abs_sum(&self, pos: &Positions) -> Result<Q, CoreError> {
        let Some((line, lo, hi)) = pos.resolve()? else {
            return Ok(Q::zero());
        };
        Ok(self.interval_sum(line, &lo, &hi, true))
    }

    fn interval_sum(&self, line: Line, lo: &BigUint, hi: &BigUint, absolute: bool) -> Q {
        let mut acc = Q::zero();
        for r in self.line_runs(line) {
            let ov = r.overlap(lo, hi);
            if ov.is_zero() {
                continue;
            }
            let c = if absolute { r.coeff.abs() } else { r.coeff.clone() };
            acc += c * Q::from_integer(ov.into());
        }
        acc
    }

    /// Largest possible sum of `|x_i|` over `c` positions of `line`.
    pub fn top_abs_sum(&self, line: Line, c: &BigUint) -> Q {
        let mut runs: Vec<&Run> = self.line_runs(line).collect();
        runs.sort_by(|a, b| b.coeff.abs().cmp(&a.coeff.abs()));
        let mut left = c.clone();
        let mut acc = Q::zero();
        for r in runs {
            if left.is_zero() {
                break;
            }
            let take = if r.len < left { r.len.clone() } else { left.clone() };
            left -= &take;
            acc += r.coeff.abs() * Q::from_integer(take.into());
        }
        acc
    }

    pub fn coeff_at(&self, line: Line, pos: &BigUint) -> Q {
        self.line_runs(line)
            .find(|r| &r.start <= pos && pos <= &r.end())
            .map(|r| r.coeff.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, s: &Q) -> RleVec {
        if s.is_zero() {
            return RleVec::default();
        }
        RleVec {
            runs: self
                .runs
                .iter()
                .map(|r| Run { coeff: &r.coeff * s, ..r.clone() })
                .collect(),
        }
    }

    /// Expands into a sparse vector over the MR scheme.
    pub fn to_finvec(&self) -> Result<FinVec, CoreError> {
        let total = self.support_size();
        if total > BigUint::from(EXPAND_LIMIT) {
            return Err(CoreError::TooLarge(total.to_string()));
        }
        let mut v = FinVec::zero(IndexScheme::MrLine);
        for r in &self.runs {
            let start = r.start.to_u64().ok_or_else(|| CoreError::TooLarge(r.start.to_string()))?;
            let len = r.len.to_u64().unwrap_or(0);
            for p in start..start + len {
                v.set(Index::Nat(natural_of(r.line, p)), r.coeff.clone());
            }
        }
        Ok(v)
    }

    /// Compresses a sparse MR vector into maximal constant runs.
    pub fn from_finvec(v: &FinVec) -> Result<RleVec, CoreError> {
        if v.scheme() != IndexScheme::MrLine && v.scheme() != IndexScheme::Natural {
            return Err(CoreError::SchemeMismatch(v.scheme().to_string(), "mrline".into()));
        }
        let mut cells: Vec<(Line, u64, Q)> = Vec::with_capacity(v.len());
        for (idx, c) in v.iter() {
            let Index::Nat(n) = idx else {
                return Err(CoreError::MalformedIndex { index: idx.to_string(), scheme: "mrline".into() });
            };
            let (line, p) = position_of(*n);
            cells.push((line, p, c.clone()));
        }
        cells.sort_by(|a, b| match a.0.cmp(&b.0) {
            Ordering::Equal => a.1.cmp(&b.1),
            o => o,
        });
        let mut runs: Vec<Run> = Vec::new();
        for (line, p, c) in cells {
            if let Some(last) = runs.last_mut() {
                if last.line == line && last.coeff == c && last.end() + 1u32 == BigUint::from(p) {
                    last.len += 1u32;
                    continue;
                }
            }
            runs.push(Run::new(line, p, 1u32, c));
        }
        RleVec::new(runs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qi};

    #[test]
    fn huge_run_prefix() {
        let len = BigUint::from(10u32).pow(60);
        let x = RleVec::new(vec![Run::new(Line::N1, 1u32, len, q(1, 16))]).unwrap();
        let s = x.restrict_sum(&Positions::Count { line: Line::N1, n: 256u32.into() }).unwrap();
        assert_eq!(s, qi(16));
        let other = x.restrict_sum(&Positions::Count { line: Line::N2, n: 256u32.into() }).unwrap();
        assert_eq!(other, qi(0));
    }

    #[test]
    fn symmetric_runs_cancel() {
        let x = RleVec::new(vec![
            Run::new(Line::N2, 1u32, 3u32, q(1, 2)),
            Run::new(Line::N2, 4u32, 3u32, q(-1, 2)),
        ])
        .unwrap();
        let s = x
            .restrict_sum(&Positions::Interval { line: Line::N2, lo: 1u32.into(), hi: 6u32.into() })
            .unwrap();
        assert_eq!(s, qi(0));
    }

    #[test]
    fn straddling_and_overlap_errors() {
        let x = RleVec::default();
        assert_eq!(x.restrict_sum(&Positions::Naturals { lo: 1, hi: 2 }), Err(CoreError::StraddlesLines));
        let bad = RleVec::new(vec![
            Run::new(Line::N1, 1u32, 3u32, qi(1)),
            Run::new(Line::N1, 3u32, 3u32, qi(1)),
        ]);
        assert_eq!(bad, Err(CoreError::OverlappingRuns(1)));
    }

    #[test]
    fn compress_roundtrip() {
        let x = RleVec::new(vec![
            Run::new(Line::N1, 2u32, 4u32, q(1, 3)),
            Run::new(Line::N2, 1u32, 2u32, qi(-1)),
            Run::new(Line::N2, 3u32, 1u32, qi(2)),
        ])
        .unwrap();
        let v = x.to_finvec().unwrap();
        assert_eq!(v.len(), 7);
        assert_eq!(v.get(&Index::Nat(3)), q(1, 3));
        assert_eq!(RleVec::from_finvec(&v).unwrap(), x);
        assert_eq!(x.top_abs_sum(Line::N2, &2u32.into()), qi(3));
    }
}
