//! End-to-end verifiers for the four counterexamples.

mod ell1;
mod rank_one;
mod selectors;

use jsm_core::num::parse_rational;
use jsm_core::{q, qi, FinVec, IndexScheme, Q};
use num_bigint::BigInt;
use rand::Rng;

use crate::error::UalsError;
use crate::report::GapReport;

pub use ell1::{ell1_extremes, ell1_selector, ell1_witnesses};
pub use rank_one::{corners, rank_one_extremes, rank_one_selector};
pub use selectors::{greedy_slots, SelectorCase};

#[derive(Clone, Debug, PartialEq)]
pub enum Case {
    /// Truncation to coordinates `1..=2m`.
    Ell1 { m: u64 },
    Calx { n: u32 },
    Mixed { p: Q, q: Q, n: u32 },
    RankOne,
}

impl Case {
    pub fn name(&self) -> String {
        match self {
            Case::Ell1 { .. } => "ell1".into(),
            Case::Calx { n } => format!("calx({n})"),
            Case::Mixed { p, q, n } => {
                format!("mixed({},{},{n})", jsm_core::num::fmt_rational(p), jsm_core::num::fmt_rational(q))
            }
            Case::RankOne => "rank-one".into(),
        }
    }

    /// `name` is one of `ell1`, `calx`, `mixed`, `rank-one`; missing
    /// parameters take the desk defaults.
    pub fn parse(name: &str, n: Option<u32>, p: Option<&str>, q_: Option<&str>) -> Result<Case, UalsError> {
        Ok(match name {
            "ell1" => Case::Ell1 { m: 50 },
            "calx" => Case::Calx { n: n.unwrap_or(3) },
            "mixed" => Case::Mixed {
                p: p.map(parse_rational).transpose()?.unwrap_or_else(|| q(3, 2)),
                q: q_.map(parse_rational).transpose()?.unwrap_or_else(|| qi(3)),
                n: n.unwrap_or(4),
            },
            "rank-one" | "rank_one" => Case::RankOne,
            other => return Err(UalsError::UnknownCase(other.to_string())),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CaseOptions {
    pub probes: usize,
    /// Sampled hull combinations for the lower-bound direction.
    pub samples: usize,
    /// Descent restarts, and separately optimized hull points where used.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions { probes: 200, samples: 100, restarts: 20, seed: 0 }
    }
}

const MAX_N: u32 = 6;
const MAX_COORDS: u64 = 2000;
const MAX_PROBES: usize = 10_000;

pub fn verify_case(case: &Case, opts: &CaseOptions) -> Result<GapReport, UalsError> {
    if opts.probes > MAX_PROBES || opts.samples > MAX_PROBES {
        return Err(UalsError::Budget(format!("at most {MAX_PROBES} probes and samples")));
    }
    match case {
        Case::Ell1 { m } => {
            if *m < 2 || 2 * m > MAX_COORDS {
                return Err(UalsError::Budget(format!("truncation 2m = {} outside 4..={MAX_COORDS}", 2 * m)));
            }
            ell1::verify(*m, opts)
        }
        Case::Calx { n } => {
            check_n(*n)?;
            selectors::verify(&SelectorCase::calx(*n), opts)
        }
        Case::Mixed { p, q, n } => {
            check_n(*n)?;
            if !(*p >= qi(1) && p < q) {
                return Err(UalsError::Exponent("mixed case needs 1 <= p < q".into()));
            }
            selectors::verify(&SelectorCase::mixed(p.clone(), q.clone(), *n), opts)
        }
        Case::RankOne => rank_one::verify(opts),
    }
}

fn check_n(n: u32) -> Result<(), UalsError> {
    if n == 0 || n > MAX_N {
        return Err(UalsError::Budget(format!("n = {n} outside 1..={MAX_N}")));
    }
    Ok(())
}

/// Random rational with numerator in `-num..=num`, denominator in `1..=den`.
fn rat<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    jsm_core::random::rational(rng, num, den)
}

/// Rational point of the Euclidean unit sphere in dimension `d`, by inverse
/// stereographic projection.
fn sphere_point<R: Rng>(rng: &mut R, d: usize) -> Vec<Q> {
    if d == 1 {
        return vec![if rng.random::<bool>() { qi(1) } else { qi(-1) }];
    }
    let t: Vec<Q> = (0..d - 1).map(|_| rat(rng, 9, 9)).collect();
    let s: Q = t.iter().map(|x| x * x).sum();
    let den = &s + qi(1);
    let mut out: Vec<Q> = t.iter().map(|x| x * qi(2) / &den).collect();
    out.push((&s - qi(1)) / &den);
    out
}

/// Nonnegative rationals summing to one, some of them zero.
fn simplex_point<R: Rng>(rng: &mut R, k: usize, zero_prob: f64) -> Vec<Q> {
    loop {
        let raw: Vec<i64> =
            (0..k).map(|_| if rng.random_bool(zero_prob) { 0 } else { rng.random_range(1..=20) }).collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            return raw.iter().map(|r| q(*r, total)).collect();
        }
    }
}

fn scale_to_unit(x: &FinVec, norm: &Q) -> FinVec {
    x.scale(&(Q::from_integer(BigInt::from(1)) / norm))
}

fn nonzero_naturals<R: Rng>(rng: &mut R, dim: u64, num: i64, den: i64) -> FinVec {
    loop {
        let v = FinVec::from_entries(IndexScheme::Natural, (1..=dim).map(|k| (jsm_core::Index::Nat(k), rat(rng, num, den))))
            .expect("distinct indices");
        if !v.is_empty() {
            return v;
        }
    }
}
