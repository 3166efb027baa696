//! Identity on `ℓ∞²` against `co{x* ⊗ x : ‖x‖ ≤ 1, ‖x*‖ ≤ 1}`.

use jsm_core::num::fmt_rational;
use jsm_core::{q, qi, FinVec, Index, Q};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::json;

use super::{nonzero_naturals, rat, simplex_point, CaseOptions};
use crate::error::UalsError;
use crate::gap::{minimax_descent, minimax_gap, operator_gap, pointwise_gap, residual_gap, GapValue};
use crate::norm::BlockNorm;
use crate::operator::{Action, ConvexCombination, OperatorModel, Space};
use crate::report::{GapReport, ProbeGap, SubspaceLower, SubspaceUpper};

fn space() -> Space {
    Space::naturals(2, BlockNorm::linf())
}

fn rank_one(functional: Vec<Q>, vector: Vec<Q>) -> OperatorModel {
    OperatorModel::new(space(), space(), Action::RankOne { functional, vector })
}

const SIGNS: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// `e*_i ⊗ c` for the two coordinate functionals and the four corners `c`.
/// The dual ball is `co{±e*_i}` and `(−e*_i) ⊗ c = e*_i ⊗ (−c)`, so these
/// eight span the whole hull.
pub fn rank_one_extremes() -> Vec<OperatorModel> {
    let mut out = Vec::new();
    for i in 0..2 {
        for (s1, s2) in SIGNS {
            let mut f = vec![qi(0), qi(0)];
            f[i] = qi(1);
            out.push(rank_one(f, vec![qi(s1), qi(s2)]));
        }
    }
    out
}

/// Extreme points of the `ℓ∞²` ball up to sign; the operator norm of any
/// `T` is the max of `‖T c‖` over these.
pub fn corners() -> Vec<FinVec> {
    vec![FinVec::naturals(&[qi(1), qi(1)]), FinVec::naturals(&[qi(1), qi(-1)])]
}

/// `x* ⊗ y/‖y‖` with `x*` norming `y`, written over the extreme points.
pub fn rank_one_selector(y: &FinVec) -> Result<ConvexCombination, UalsError> {
    space().check(y)?;
    let c = [y.get(&Index::Nat(1)), y.get(&Index::Nat(2))];
    let i = if c[1].abs() > c[0].abs() { 1 } else { 0 };
    let norm = c[i].abs();
    if norm.is_zero() {
        return Err(UalsError::Dimension("zero probe".into()));
    }
    let s = if c[i].is_negative() { -Q::one() } else { Q::one() };
    let x = [&c[0] / &norm, &c[1] / &norm];
    // Bilinear weights of x over the corners; s e*_i ⊗ corner = e*_i ⊗ (s corner).
    let mut w = vec![Q::zero(); 8];
    for (s1, s2) in SIGNS {
        let wc = (qi(1) + qi(s1) * &x[0]) * (qi(1) + qi(s2) * &x[1]) / qi(4);
        let target = (&s * qi(s1), &s * qi(s2));
        let k = SIGNS.iter().position(|(a, b)| (qi(*a), qi(*b)) == target).expect("corner");
        w[4 * i + k] += wc;
    }
    ConvexCombination::new(rank_one_extremes(), w)
}

fn random_ball<R: Rng>(rng: &mut R, dual: bool) -> Vec<Q> {
    let v = vec![rat(rng, 9, 9), rat(rng, 9, 9)];
    let n = if dual { v[0].abs() + v[1].abs() } else { v[0].abs().max(v[1].abs()) };
    if n > Q::one() {
        v.iter().map(|c| c / &n).collect()
    } else {
        v
    }
}

pub(super) fn verify(opts: &CaseOptions) -> Result<GapReport, UalsError> {
    let id = OperatorModel::new(space(), space(), Action::Identity);
    let hull = rank_one_extremes();
    let mut rng = jsm_core::random::seeded(opts.seed);
    let fifth = q(1, 5);
    let mut rep = GapReport::new("rank-one", json!({"dimension": 2, "norm": "linf"}), "= 0".into());

    let mut probes: Vec<(String, FinVec)> = Vec::new();
    for (s1, s2) in SIGNS {
        probes.push((format!("corner({s1},{s2})"), FinVec::naturals(&[qi(s1), qi(s2)])));
    }
    for r in 0..opts.probes {
        let y = nonzero_naturals(&mut rng, 2, 9, 9);
        probes.push((format!("random{r}"), y.scale(&(qi(1) / y.max_abs()))));
    }
    let mut zero = true;
    for (label, y) in &probes {
        let g = residual_gap(&id, &rank_one_selector(y)?, y)?;
        zero &= g == GapValue::Exact(Q::zero());
        rep.pointwise.push(ProbeGap { label: label.clone(), gap: g });
    }
    rep.check("pointwise", zero, format!("norming-functional selector gap exactly 0 on {} probes", probes.len()));
    let lp_zero = probes
        .iter()
        .take(24)
        .map(|(_, y)| pointwise_gap(&id, &hull, y).map(|s| s.value == GapValue::Exact(Q::zero())))
        .collect::<Result<Vec<_>, _>>()?;
    rep.check("pointwise-lp", lp_zero.iter().all(|z| *z), format!("LP over the extreme points gives 0 on {} probes", lp_zero.len()));

    // ‖I − B‖ on sampled hull points built from arbitrary rank-one operators.
    let mut sampled_ok = true;
    let mut worst: Option<Q> = None;
    for _ in 0..opts.samples {
        let k = rng.random_range(1..=5usize);
        let points: Vec<OperatorModel> =
            (0..k).map(|_| rank_one(random_ball(&mut rng, true), random_ball(&mut rng, false))).collect();
        let comb = ConvexCombination::new(points, simplex_point(&mut rng, k, 0.0))?;
        let GapValue::Exact(g) = operator_gap(&id, &comb, &corners())? else { unreachable!("linf is exact") };
        sampled_ok &= g >= fifth;
        worst = Some(worst.map_or(g.clone(), |w: Q| w.min(g)));
    }
    rep.check(
        "norm-sampled",
        sampled_ok,
        format!("|I-B| >= 1/5 on {} samples, smallest {}", opts.samples, worst.map_or("-".into(), |w| fmt_rational(&w))),
    );

    // Descent-optimized hull points, each checked exactly after rounding.
    let mut desc_ok = true;
    let mut best_desc = f64::INFINITY;
    for r in 0..opts.restarts {
        let d = minimax_descent(&id, &hull, &corners(), 1, opts.seed.wrapping_add(r as u64 + 1))?;
        let comb = ConvexCombination::from_f64(hull.clone(), &d.weights)?;
        let g = operator_gap(&id, &comb, &corners())?;
        desc_ok &= g.at_least(&fifth, 0.0) && d.value >= 0.2 - 1e-9;
        best_desc = best_desc.min(d.value);
    }
    rep.check("norm-descent", desc_ok, format!("{} optimized hull points, best {:.12}", opts.restarts, best_desc));

    let lp = minimax_gap(&id, &hull, &corners())?;
    rep.check("minimax-lp", lp.value.at_least(&fifth, 0.0), format!("min over the hull of |I-B| = {}", lp.value));
    let comb = lp.weights.combination(&hull)?;
    let up = operator_gap(&id, &comb, &corners())?;
    rep.check("lower<=upper", lp.value.to_f64() <= up.to_f64(), format!("{} <= {}", lp.value, up));
    rep.lower = Some(SubspaceLower { value: lp.value.clone(), witnesses: corners() });
    rep.upper = Some(SubspaceUpper { value: up, points: hull.iter().map(|h| h.label()).collect(), weights: lp.weights });
    Ok(rep)
}
