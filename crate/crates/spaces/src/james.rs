//! James space: `‖x‖² = sup Σ_i (Σ_{n∈I_i} x_n)²` over disjoint intervals.

use jsm_core::{FinVec, Index, IndexScheme, Q};
use num_traits::Zero;

use crate::error::SpaceError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JamesNorm {
    pub value: Q,
    /// Chosen intervals as inclusive `(first, last)` support naturals.
    pub intervals: Vec<(u64, u64)>,
}

fn naturals(x: &FinVec) -> Result<Vec<(u64, Q)>, SpaceError> {
    if x.scheme() != IndexScheme::Natural {
        return Err(SpaceError::Scheme { expected: "natural", got: x.scheme().to_string() });
    }
    Ok(x.iter()
        .map(|(i, c)| match i {
            Index::Nat(n) => (*n, c.clone()),
            _ => unreachable!("validated natural index"),
        })
        .collect())
}

/// Exact squared James norm. Only the order of the support matters, so the
/// optimisation runs over blocks of consecutive support points:
/// `best[i] = max(best[i-1], max_j best[j-1] + (S_i - S_{j-1})²)`.
pub fn james_norm_sq(x: &FinVec) -> Result<JamesNorm, SpaceError> {
    let pts = naturals(x)?;
    let m = pts.len();
    let mut prefix = vec![Q::zero(); m + 1];
    for (i, (_, c)) in pts.iter().enumerate() {
        prefix[i + 1] = &prefix[i] + c;
    }
    let mut best = vec![Q::zero(); m + 1];
    // 0 = position skipped, otherwise the block start (1-based).
    let mut choice = vec![0usize; m + 1];
    for i in 1..=m {
        best[i] = best[i - 1].clone();
        for j in 1..=i {
            let s = &prefix[i] - &prefix[j - 1];
            let cand = &best[j - 1] + &s * &s;
            if cand > best[i] {
                best[i] = cand;
                choice[i] = j;
            }
        }
    }
    let mut intervals = Vec::new();
    let mut i = m;
    while i > 0 {
        match choice[i] {
            0 => i -= 1,
            j => {
                intervals.push((pts[j - 1].0, pts[i - 1].0));
                i = j - 1;
            }
        }
    }
    intervals.reverse();
    Ok(JamesNorm { value: best[m].clone(), intervals })
}

/// The sum of squared interval sums for an explicit interval family.
pub fn interval_value(x: &FinVec, intervals: &[(u64, u64)]) -> Q {
    intervals
        .iter()
        .map(|&(a, b)| {
            let s: Q = x
                .iter()
                .filter(|(i, _)| matches!(i, Index::Nat(n) if *n >= a && *n <= b))
                .map(|(_, c)| c.clone())
                .sum();
            &s * &s
        })
        .sum()
}

/// Two sequences in James space, `e¹_n = e_{2n} + e_1` and
/// `e²_n = e_{2n+1} - e_1`, which jointly behave like a plegma spreading pair.
#[derive(Clone, Debug)]
pub struct JamesPair {
    pub first: Vec<FinVec>,
    pub second: Vec<FinVec>,
    pub plegma_spreading_expected: bool,
}

pub fn james_pair_vector(i: u32, n: u64) -> FinVec {
    let one = Q::from_integer(1.into());
    let mut v = FinVec::zero(IndexScheme::Natural);
    if i == 1 {
        v.set(Index::Nat(2 * n), one.clone());
        v.set(Index::Nat(1), one);
    } else {
        v.set(Index::Nat(2 * n + 1), one.clone());
        v.set(Index::Nat(1), -one);
    }
    v
}

pub fn james_example_pair(n_max: u64) -> JamesPair {
    JamesPair {
        first: (1..=n_max).map(|n| james_pair_vector(1, n)).collect(),
        second: (1..=n_max).map(|n| james_pair_vector(2, n)).collect(),
        plegma_spreading_expected: true,
    }
}

/// Realises `Σ a_{in} e^i_n` (interleaved, l = 2) as a vector in James space.
pub fn james_pair_realize(x: &FinVec) -> Result<FinVec, SpaceError> {
    if x.scheme() != IndexScheme::Interleaved(2) {
        return Err(SpaceError::Scheme { expected: "interleaved(2)", got: x.scheme().to_string() });
    }
    let mut out = FinVec::zero(IndexScheme::Natural);
    for (idx, c) in x.iter() {
        let Index::Pair { n, i } = idx else { unreachable!() };
        for (k, v) in james_pair_vector(*i, *n).iter() {
            out.add_at(k.clone(), &(v * c));
        }
    }
    Ok(out)
}
