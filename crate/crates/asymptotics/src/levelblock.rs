//! Level block families in the James tree.
//!
//! Each vector is a signed combination of tripods `e_s − e_{s0} − e_{s1}`
//! whose parents sit on the top level of a two-level band. A segment
//! through a tripod parent continues into one of its children, so every
//! initial segment that passes a tripod sums to zero on it. Bands are
//! nested under an unused node of the previous band, which keeps every
//! segment inside the support region of at most one band.

use jsm_core::random::seeded;
use jsm_core::{Band, FinVec, Index, IndexScheme, Node, Q};
use jsm_spaces::jt_norm_sq;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::error::AsymError;
use crate::norm::{NormValue, Ratio};

/// Tripod weight patterns `w` with `3 Σ w² = 1`.
const PATTERNS: [(&[i64], i64); 3] = [(&[1, 1, 1], 3), (&[1, 1, 1, 3], 6), (&[5, 1, 1], 9)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBlockFamily {
    pub bands: Vec<Band>,
    /// `sets[n]` holds the `l` vectors of band `n`.
    pub sets: Vec<Vec<FinVec>>,
    /// Decreasing tolerances, one per band.
    pub eps: Vec<Q>,
    /// Target slack in `(√2 + ε)`.
    pub epsilon: Q,
}

impl LevelBlockFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn l(&self) -> usize {
        self.sets.first().map_or(0, Vec::len)
    }

    /// `Σ_n 2^{q_n} Σ_{i≥n} (i+1) ε_i` over the finite prefix.
    pub fn budget_value(&self) -> Q {
        let n = self.eps.len();
        let mut total = Q::zero();
        for a in 0..n {
            let inner: Q = (a..n).map(|i| Q::from_integer(BigInt::from(i + 2)) * &self.eps[i]).sum();
            total += Q::from_integer(BigInt::one() << self.bands[a].hi) * inner;
        }
        total
    }
}

fn tripod(x: &mut FinVec, s: &Node, c: &Q) {
    x.add_at(Index::Node(s.clone()), c);
    for b in 0..2 {
        x.add_at(Index::Node(s.child(b)), &-c.clone());
    }
}

fn descendants(a: &Node, depth: usize) -> Vec<Node> {
    let mut out = vec![a.clone()];
    for _ in 0..depth {
        out = out.iter().flat_map(|s| [s.child(0), s.child(1)]).collect();
    }
    out
}

/// Builds `n_families` bands of `l` vectors each, all of squared norm 1.
pub fn build_level_block_family(depth_budget: usize, n_families: usize, l: usize, seed: u64) -> Result<LevelBlockFamily, AsymError> {
    let mut rng = seeded(seed);
    let max_tripods = PATTERNS.iter().map(|p| p.0.len()).max().unwrap_or(0);
    let drop = if l * max_tripods < 8 { 3 } else if l * max_tripods < 16 { 4 } else { 5 };
    let needed = drop * n_families + 1;
    if needed > depth_budget {
        return Err(AsymError::Budget { budget: depth_budget, needed });
    }
    let mut anchor = Node::root();
    let mut bands = Vec::new();
    let mut sets = Vec::new();
    for _ in 0..n_families {
        let mut pool = descendants(&anchor, drop);
        pool.shuffle(&mut rng);
        let top = anchor.level() + drop;
        let mut vectors = Vec::new();
        for _ in 0..l {
            let (ws, den) = *PATTERNS.choose(&mut rng).expect("patterns");
            let mut x = FinVec::zero(IndexScheme::Dyadic);
            for w in ws {
                let sign = if rng.random_bool(0.5) { 1 } else { -1 };
                let s = pool.pop().expect("pool sized for l tripod sets");
                tripod(&mut x, &s, &Q::new((sign * w).into(), den.into()));
            }
            vectors.push(x);
        }
        anchor = pool.pop().expect("one spare node for the next band");
        bands.push(Band::new(top, top + 1).expect("ordered levels"));
        sets.push(vectors);
    }
    let epsilon = Q::new(1.into(), 20.into());
    let eps = tolerances(&bands, &epsilon);
    Ok(LevelBlockFamily { bands, sets, eps, epsilon })
}

/// `ε_i = c/2^i` with `c` small enough that the double sum stays below `ε`.
pub fn tolerances(bands: &[Band], epsilon: &Q) -> Vec<Q> {
    let n = bands.len();
    let top = bands.iter().map(|b| b.hi).max().unwrap_or(0);
    let weight: u64 = (1..=n as u64).map(|i| i + 1).sum::<u64>().max(1);
    let c = epsilon / Q::from_integer(BigInt::from(n.max(1) as u64 * weight) << top);
    (1..=n).map(|i| &c / Q::from_integer(BigInt::one() << i)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub budget_value: Q,
    pub initial_segments: usize,
}

fn nodes_of(x: &FinVec) -> impl Iterator<Item = (&Node, &Q)> {
    x.iter().filter_map(|(i, c)| match i {
        Index::Node(s) => Some((s, c)),
        _ => None,
    })
}

/// Checks the finite hypotheses: supports in successive bands, unit norms,
/// the one-band-per-initial-segment separation at every `ε_n`, and the
/// double-sum budget.
pub fn check_hypotheses(fam: &LevelBlockFamily) -> Result<HypothesisReport, AsymError> {
    let fail = |condition, detail: String| Err(AsymError::Hypothesis { condition, detail });
    if fam.eps.len() != fam.len() || fam.bands.len() != fam.len() {
        return fail("shape", format!("{} bands, {} sets, {} tolerances", fam.bands.len(), fam.len(), fam.eps.len()));
    }
    for w in fam.bands.windows(2) {
        if !w[0].precedes(&w[1]) {
            return fail("successive bands", format!("{:?} then {:?}", w[0], w[1]));
        }
    }
    for w in fam.eps.windows(2) {
        if w[1] >= w[0] || !w[1].is_positive() {
            return fail("decreasing tolerances", format!("{} then {}", w[0], w[1]));
        }
    }
    for (n, (band, set)) in fam.bands.iter().zip(&fam.sets).enumerate() {
        for x in set {
            if let Some((s, _)) = nodes_of(x).find(|(s, _)| !band.contains(s)) {
                return fail("support in band", format!("node {} outside band {}", s.as_str(), n + 1));
            }
            let v = jt_norm_sq(x)?.value;
            if !v.is_one() {
                return fail("normalized", format!("band {} has squared norm {v}", n + 1));
            }
        }
    }
    // Initial segments only change value at support nodes.
    let ends: Vec<&Node> = fam.sets.iter().flatten().flat_map(|x| nodes_of(x).map(|(s, _)| s)).collect();
    for t in &ends {
        let hits: Vec<Q> = fam
            .sets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|x| nodes_of(x).filter(|(s, _)| s.precedes(t)).map(|(_, c)| c.clone()).sum::<Q>().abs())
                    .max()
                    .unwrap_or_else(Q::zero)
            })
            .collect();
        for (n, e) in fam.eps.iter().enumerate() {
            let big: Vec<usize> = (n + 1..fam.len()).filter(|&m| hits[m] >= *e).collect();
            if big.len() > 1 {
                return fail("(i)", format!("initial segment to {} meets bands {:?} above ε_{}", t.as_str(), big, n + 1));
            }
        }
    }
    let budget_value = fam.budget_value();
    if budget_value >= fam.epsilon {
        return fail("(ii)", format!("{budget_value} ≥ {}", fam.epsilon));
    }
    Ok(HypothesisReport { budget_value, initial_segments: ends.len() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelCheck {
    pub lower_ratio: Q,
    pub upper_ratio: Q,
    pub evaluations: u64,
    /// `1 ≤ lower` and `upper ≤ (√2 + ε)²`.
    pub holds: bool,
}

/// Extremes of `‖Σ a_i x_i‖² / Σ a_i²` over every choice of one vector per
/// band and every coefficient vector.
pub fn level_block_check(fam: &LevelBlockFamily, coeffs: &[Vec<Q>]) -> Result<LevelCheck, AsymError> {
    check_hypotheses(fam)?;
    let n = fam.len();
    let l = fam.l();
    let mut lower: Option<Q> = None;
    let mut upper: Option<Q> = None;
    let mut evaluations = 0;
    let selections = (l as u64).pow(n as u32);
    for sel in 0..selections {
        let mut pick = Vec::with_capacity(n);
        let mut rest = sel;
        for set in &fam.sets {
            pick.push(&set[(rest % l as u64) as usize]);
            rest /= l as u64;
        }
        for a in coeffs {
            if a.len() != n {
                return Err(AsymError::Hypothesis { condition: "coefficients", detail: format!("{} coefficients for {n} bands", a.len()) });
            }
            let a2: Q = a.iter().map(|c| c * c).sum();
            if a2.is_zero() {
                continue;
            }
            let mut sum = FinVec::zero(IndexScheme::Dyadic);
            for (c, x) in a.iter().zip(&pick) {
                sum = sum.lin_comb(&Q::one(), x, c)?;
            }
            let r = jt_norm_sq(&sum)?.value / a2;
            evaluations += 1;
            lower = Some(lower.map_or(r.clone(), |v: Q| v.min(r.clone())));
            upper = Some(upper.map_or(r.clone(), |v: Q| v.max(r)));
        }
    }
    let (Some(lower_ratio), Some(upper_ratio)) = (lower, upper) else { return Err(AsymError::ZeroRow) };
    let bound = Ratio::of(&NormValue::Exact(upper_ratio.clone()), &NormValue::Exact(Q::one()));
    // upper ≤ (√2 + ε)² ⇔ √upper ≤ √2 + ε
    let holds = lower_ratio >= Q::one() && bound.at_most_sqrt_plus(&Q::from_integer(2.into()), &fam.epsilon);
    Ok(LevelCheck { lower_ratio, upper_ratio, evaluations, holds })
}

/// All `±1` vectors of length `n`.
pub fn sign_vectors(n: usize) -> Vec<Vec<Q>> {
    (0..1u32 << n)
        .map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -Q::one() } else { Q::one() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use jsm_core::qi;

    #[test]
    fn singleton_family() {
        let fam = build_level_block_family(10, 1, 1, 1).unwrap();
        let r = level_block_check(&fam, &[vec![qi(1)]]).unwrap();
        assert_eq!((r.lower_ratio, r.upper_ratio), (qi(1), qi(1)));
    }

    #[test]
    fn two_by_two() {
        let fam = build_level_block_family(12, 2, 2, 7).unwrap();
        assert_eq!(fam.sets.iter().map(Vec::len).sum::<usize>(), 4);
        let rep = check_hypotheses(&fam).unwrap();
        assert!(rep.budget_value < fam.epsilon);
        let r = level_block_check(&fam, &sign_vectors(2)).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn broken_normalization_is_reported() {
        let mut fam = build_level_block_family(12, 2, 1, 3).unwrap();
        fam.sets[1][0] = fam.sets[1][0].scale(&qi(2));
        assert!(matches!(check_hypotheses(&fam), Err(AsymError::Hypothesis { condition: "normalized", .. })));
    }

    #[test]
    fn budget_too_small() {
        assert!(matches!(build_level_block_family(5, 4, 2, 1), Err(AsymError::Budget { .. })));
    }
}
