//! `A x = (Σ odd x) e₁ + (Σ even x) e₂` on `ℓ₁`, hull `co{B_z^± : ‖z‖₁ ≤ 1}`.

use jsm_core::{q, qi, FinVec, Index, IndexScheme, Q};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::json;

use super::{nonzero_naturals, rat, scale_to_unit, CaseOptions};
use crate::error::UalsError;
use crate::gap::{minimax_descent, minimax_gap, operator_gap, pointwise_gap, residual_gap, GapValue};
use crate::norm::BlockNorm;
use crate::operator::{Action, ConvexCombination, OperatorModel, Sign, Space};
use crate::report::{GapReport, ProbeGap, SubspaceLower, SubspaceUpper};

fn spaces(m: u64) -> (Space, Space) {
    (Space::naturals(2 * m, BlockNorm::l1()), Space::naturals(2, BlockNorm::l1()))
}

fn b_op(m: u64, sign: Sign, z: [Q; 2]) -> OperatorModel {
    let (d, c) = spaces(m);
    OperatorModel::new(d, c, Action::Ell1B { sign, z })
}

/// `B^±_z` for `z ∈ {±e₁, ±e₂}`; every `B^±_z` with `‖z‖₁ ≤ 1` is a convex
/// combination of these eight since `z ↦ B^±_z` is linear.
pub fn ell1_extremes(m: u64) -> Vec<OperatorModel> {
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        for z in [[qi(1), qi(0)], [qi(-1), qi(0)], [qi(0), qi(1)], [qi(0), qi(-1)]] {
            out.push(b_op(m, sign, z));
        }
    }
    out
}

fn extreme_slot(sign: Sign, coord: usize, positive: bool) -> usize {
    let s = if sign == Sign::Plus { 0 } else { 4 };
    s + 2 * coord + usize::from(!positive)
}

/// A hull point agreeing with `A` at `x`: `B^+_z` with `z = Ax/(a₁+a₂)` or
/// `B^-_z` with `z = Ax/(a₁−a₂)`, whichever denominator is larger.
pub fn ell1_selector(m: u64, x: &FinVec) -> Result<ConvexCombination, UalsError> {
    let (d, c) = spaces(m);
    let a = OperatorModel::new(d, c, Action::OddEven).apply(x)?;
    let (a1, a2) = (a.get(&Index::Nat(1)), a.get(&Index::Nat(2)));
    let mut w = vec![Q::zero(); 8];
    if a1.is_zero() && a2.is_zero() {
        w[0] = q(1, 2);
        w[1] = q(1, 2);
    } else {
        let (plus, minus) = (&a1 + &a2, &a1 - &a2);
        let (sign, den) = if plus.abs() >= minus.abs() { (Sign::Plus, plus) } else { (Sign::Minus, minus) };
        for (coord, ac) in [&a1, &a2].into_iter().enumerate() {
            let zc = ac / &den;
            if !zc.is_zero() {
                w[extreme_slot(sign, coord, zc.is_positive())] += zc.abs();
            }
        }
    }
    ConvexCombination::new(ell1_extremes(m), w)
}

/// `(e_{2k−1} + e_{2k})/2` and `(e_{2k−1} − e_{2k})/2`.
pub fn ell1_witnesses(k: u64) -> [FinVec; 2] {
    let h = q(1, 2);
    let mk = |s: Q| {
        FinVec::from_entries(IndexScheme::Natural, [(Index::Nat(2 * k - 1), h.clone()), (Index::Nat(2 * k), s)]).unwrap()
    };
    [mk(h.clone()), mk(-h.clone())]
}

fn random_z<R: rand::Rng>(rng: &mut R) -> [Q; 2] {
    let z = [rat(rng, 9, 9), rat(rng, 9, 9)];
    let n = z[0].abs() + z[1].abs();
    if n > Q::one() {
        [&z[0] / &n, &z[1] / &n]
    } else {
        z
    }
}

pub(super) fn verify(m: u64, opts: &CaseOptions) -> Result<GapReport, UalsError> {
    let (d, c) = spaces(m);
    let a = OperatorModel::new(d.clone(), c, Action::OddEven);
    let hull = ell1_extremes(m);
    let mut rng = jsm_core::random::seeded(opts.seed);
    let mut rep = GapReport::new("ell1", json!({"m": m, "coordinates": 2 * m}), "= 0".into());

    // Pointwise direction: extreme points of the ball, then random unit vectors.
    let mut probes: Vec<(String, FinVec)> = Vec::new();
    for k in 1..=2 * m {
        for s in [1, -1] {
            probes.push((format!("{}e{k}", if s > 0 { "+" } else { "-" }), FinVec::unit(IndexScheme::Natural, Index::Nat(k)).scale(&qi(s))));
        }
    }
    for r in 0..opts.probes {
        let x = nonzero_naturals(&mut rng, 2 * m, 9, 9);
        let x = scale_to_unit(&x, &x.l1());
        probes.push((format!("random{r}"), x));
    }
    let mut all_zero = true;
    for (label, x) in &probes {
        let b = ell1_selector(m, x)?;
        let g = residual_gap(&a, &b, x)?;
        all_zero &= g == GapValue::Exact(Q::zero());
        rep.pointwise.push(ProbeGap { label: label.clone(), gap: g });
    }
    rep.check("pointwise", all_zero, format!("selector gap exactly 0 on {} probes", probes.len()));
    let lp_zero = probes
        .iter()
        .rev()
        .take(20)
        .map(|(_, x)| pointwise_gap(&a, &hull, x).map(|s| s.value == GapValue::Exact(Q::zero())))
        .collect::<Result<Vec<_>, _>>()?;
    rep.check("pointwise-lp", lp_zero.iter().all(|z| *z), "LP over the eight extreme points gives 0 on 20 probes");

    // Tail direction.
    let k = (m / 2).max(1);
    let witnesses = ell1_witnesses(k);
    let half = q(1, 2);
    let lp = minimax_gap(&a, &hull, &witnesses)?;
    rep.check("minimax-lp", lp.value.at_least(&half, 0.0), format!("LP minimax over witnesses at k = {k}: {}", lp.value));

    let desc = minimax_descent(&a, &hull, &witnesses, opts.restarts, opts.seed)?;
    let agree = (desc.value - lp.value.to_f64()).abs() <= 1e-9;
    rep.check("lp-descent", agree, format!("descent {:.12} vs LP {}", desc.value, lp.value));

    let mut sampled_ok = true;
    let mut worst = None::<Q>;
    for _ in 0..opts.samples {
        let (np, nm) = (rng.random_range(0..=3usize), rng.random_range(0..=3usize));
        let (np, nm) = if np + nm == 0 { (1, 0) } else { (np, nm) };
        let mut points = Vec::new();
        for _ in 0..np {
            points.push(b_op(m, Sign::Plus, random_z(&mut rng)));
        }
        for _ in 0..nm {
            points.push(b_op(m, Sign::Minus, random_z(&mut rng)));
        }
        let w = super::simplex_point(&mut rng, points.len(), 0.0);
        let mass_plus: Q = w[..np].iter().sum();
        let comb = ConvexCombination::new(points, w)?;
        let gp = residual_gap(&a, &comb, &witnesses[0])?;
        let gm = residual_gap(&a, &comb, &witnesses[1])?;
        let (GapValue::Exact(gp), GapValue::Exact(gm)) = (gp, gm) else { unreachable!("l1 norms are exact") };
        // The per-combination inequalities behind the tail bound.
        sampled_ok &= gp >= qi(1) - &mass_plus && gm >= mass_plus;
        let g = gp.max(gm);
        sampled_ok &= g >= half;
        worst = Some(worst.map_or(g.clone(), |v: Q| v.min(g)));
    }
    rep.check(
        "minimax-sampled",
        sampled_ok,
        format!(
            "{} sampled combinations, smallest witness gap {}",
            opts.samples,
            worst.map_or("-".into(), |v| jsm_core::num::fmt_rational(&v))
        ),
    );

    // Upper: the best hull point measured on all tail unit vectors.
    let tail: Vec<FinVec> = (2 * k - 1..=2 * m).map(|j| FinVec::unit(IndexScheme::Natural, Index::Nat(j))).collect();
    let up = minimax_gap(&a, &hull, &tail)?;
    let up_comb = up.weights.combination(&hull)?;
    let up_val = operator_gap(&a, &up_comb, &tail)?;
    rep.check("lower<=upper", lp.value.to_f64() <= up_val.to_f64(), format!("{} <= {}", lp.value, up_val));
    rep.lower = Some(SubspaceLower { value: lp.value.clone(), witnesses: witnesses.to_vec() });
    rep.upper = Some(SubspaceUpper { value: up_val, points: hull.iter().map(|h| h.label()).collect(), weights: up.weights });
    Ok(rep)
}
