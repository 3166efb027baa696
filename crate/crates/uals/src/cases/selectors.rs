//! Half-size slot selectors `I_G : X_n → Y_n`, `A_n = I_{1..2n}`.
//!
//! Covers both the `(⊕ℓ₂)_1 → (⊕ℓ₂)_∞` space and the `(⊕ℓp)_p → (⊕ℓp)_q`
//! analogue; only the norms and the pointwise bound differ.

use std::collections::BTreeSet;

use jsm_core::num::{fmt_rational, to_f64};
use jsm_core::{q, FinVec, Index, IndexScheme, Part, Q};
use serde_json::json;

use super::{rat, simplex_point, sphere_point, CaseOptions};
use crate::error::UalsError;
use crate::gap::{minimax_descent, minimax_gap, operator_gap, residual_gap, GapValue, SolverOptions};
use crate::norm::{BlockNorm, Exponent};
use crate::operator::{Action, ConvexCombination, OperatorModel, Space};
use crate::pigeonhole::{coverage, half_subsets, pigeonhole_witness};
use crate::report::{GapReport, ProbeGap, SubspaceLower, SubspaceUpper};

#[derive(Clone, Debug)]
pub struct SelectorCase {
    pub name: String,
    pub n: u32,
    /// Coordinates per slot in the truncation.
    pub inner: u64,
    pub domain: Space,
    pub codomain: Space,
    /// Exact pointwise bound, when the case has one.
    pub bound_exact: Option<Q>,
    pub bound: f64,
    pub params: serde_json::Value,
}

const INNER: u64 = 3;

impl SelectorCase {
    pub fn calx(n: u32) -> SelectorCase {
        let two = Exponent::Finite(Q::from_integer(2.into()));
        let one = Exponent::Finite(Q::from_integer(1.into()));
        let bound = q(1, n as i64 + 1);
        SelectorCase {
            name: format!("calx({n})"),
            n,
            inner: INNER,
            domain: Space::slots(n, Part::X, INNER, BlockNorm::new(two.clone(), one)),
            codomain: Space::slots(n, Part::Y, INNER, BlockNorm::new(two, Exponent::Inf)),
            bound: to_f64(&bound),
            bound_exact: Some(bound),
            params: json!({"n": n, "inner": INNER}),
        }
    }

    pub fn mixed(p: Q, q_: Q, n: u32) -> SelectorCase {
        let (pf, qf) = (to_f64(&p), to_f64(&q_));
        let r = (qf - pf) / (pf * qf);
        SelectorCase {
            name: format!("mixed({},{},{n})", fmt_rational(&p), fmt_rational(&q_)),
            n,
            inner: INNER,
            domain: Space::slots(n, Part::X, INNER, BlockNorm::flat(Exponent::Finite(p.clone()))),
            codomain: Space::slots(n, Part::Y, INNER, BlockNorm::new(Exponent::Finite(p.clone()), Exponent::Finite(q_.clone()))),
            bound: (n as f64).powf(-r),
            bound_exact: None,
            params: json!({"n": n, "p": fmt_rational(&p), "q": fmt_rational(&q_), "r": r, "inner": INNER}),
        }
    }

    pub fn op(&self, slots: BTreeSet<u32>) -> OperatorModel {
        OperatorModel::new(self.domain.clone(), self.codomain.clone(), Action::Select(slots))
    }

    pub fn a(&self) -> OperatorModel {
        self.op((1..=2 * self.n).collect())
    }

    pub fn hull(&self) -> Vec<OperatorModel> {
        half_subsets(self.n).into_iter().map(|g| self.op(g)).collect()
    }

    /// Unit vector at the last coordinate of slot `j`.
    pub fn slot_witness(&self, j: u32) -> FinVec {
        FinVec::unit(IndexScheme::MixedSum, Index::mixed(self.n, Part::X, j, self.inner))
    }
}

/// The `n` slots of largest inner norm, lower slot first on ties.
pub fn greedy_slots(x: &FinVec, norm: &BlockNorm, n: u32) -> BTreeSet<u32> {
    let blocks = BlockNorm::blocks(x);
    let exact: Option<Vec<(u32, Q)>> = (1..=2 * n)
        .map(|j| {
            let b = blocks.get(&(n, j)).cloned().unwrap_or_default();
            norm.inner_exact(&b).map(|v| (j, v))
        })
        .collect();
    let mut order: Vec<u32> = (1..=2 * n).collect();
    match exact {
        Some(vals) => order.sort_by(|a, b| vals[*b as usize - 1].1.cmp(&vals[*a as usize - 1].1)),
        None => {
            let vals: Vec<f64> = (1..=2 * n)
                .map(|j| {
                    let b = blocks.get(&(n, j)).cloned().unwrap_or_default();
                    let mut slot = FinVec::zero(IndexScheme::Natural);
                    for (k, c) in b.iter().enumerate() {
                        slot.set(Index::Nat(k as u64 + 1), c.clone());
                    }
                    BlockNorm::flat(norm.inner.clone()).value(&slot)
                })
                .collect();
            order.sort_by(|a, b| vals[*b as usize - 1].total_cmp(&vals[*a as usize - 1]));
        }
    }
    order.into_iter().take(n as usize).collect()
}

fn random_probe<R: rand::Rng>(case: &SelectorCase, rng: &mut R) -> FinVec {
    let n = case.n;
    let mut x = FinVec::zero(IndexScheme::MixedSum);
    if case.bound_exact.is_some() {
        // Rational slot norms summing to one, rational unit directions.
        let r = simplex_point(rng, 2 * n as usize, 0.25);
        for j in 1..=2 * n {
            let dir = sphere_point(rng, case.inner as usize);
            for (m, c) in dir.iter().enumerate() {
                x.set(Index::mixed(n, Part::X, j, m as u64 + 1), c * &r[j as usize - 1]);
            }
        }
    } else {
        while x.is_empty() {
            for j in 1..=2 * n {
                for m in 1..=case.inner {
                    x.set(Index::mixed(n, Part::X, j, m), rat(rng, 9, 9));
                }
            }
        }
    }
    x
}

/// `‖(A − B)x‖ / ‖x‖`.
fn relative(case: &SelectorCase, g: GapValue, x: &FinVec) -> GapValue {
    match (g, case.domain.norm.exact(x)) {
        (GapValue::Exact(v), Some(nx)) => GapValue::Exact(v / nx),
        (g, _) => GapValue::Approx(g.to_f64() / case.domain.norm.value(x)),
    }
}

fn below(case: &SelectorCase, g: &GapValue, tol: f64) -> bool {
    match (&case.bound_exact, g) {
        (Some(b), GapValue::Exact(v)) => v <= b,
        _ => g.to_f64() <= case.bound + tol,
    }
}

pub(super) fn verify(case: &SelectorCase, opts: &CaseOptions) -> Result<GapReport, UalsError> {
    let n = case.n;
    let a = case.a();
    let hull = case.hull();
    let sets = half_subsets(n);
    let mut rng = jsm_core::random::seeded(opts.seed);
    let bound_txt = match &case.bound_exact {
        Some(b) => format!("<= {}", fmt_rational(b)),
        None => format!("<= {:.12}", case.bound),
    };
    let mut rep = GapReport::new(&case.name, case.params.clone(), bound_txt);

    let mut probes: Vec<(String, FinVec)> = Vec::new();
    for j in 1..=2 * n {
        probes.push((format!("slot{j}"), FinVec::unit(IndexScheme::MixedSum, Index::mixed(n, Part::X, j, 1))));
    }
    for r in 0..opts.probes {
        probes.push((format!("random{r}"), random_probe(case, &mut rng)));
    }
    let mut ok = true;
    let mut greedy = Vec::new();
    for (label, x) in &probes {
        let g = greedy_slots(x, &case.domain.norm, n);
        let comb = ConvexCombination::single(case.op(g));
        let gap = relative(case, residual_gap(&a, &comb, x)?, x);
        ok &= below(case, &gap, 1e-9);
        greedy.push(gap.clone());
        rep.pointwise.push(ProbeGap { label: label.clone(), gap });
    }
    let exact = rep.pointwise.iter().all(|p| p.gap.is_exact());
    rep.check(
        "pointwise",
        ok,
        format!("greedy top-{n} gap {} on {} probes (exact: {exact})", rep.pointwise_bound, probes.len()),
    );

    // Hull optimum against the greedy selector on a subset of probes.
    let (checked, mut not_worse, mut equal) = if exact { (50, true, 0) } else { (10, true, 0) };
    let start = 2 * n as usize;
    let sub = &probes[start..(start + checked).min(probes.len())];
    let solver = SolverOptions { restarts: opts.restarts.min(3), seed: opts.seed, force_descent: false };
    for (i, (_, x)) in sub.iter().enumerate() {
        let s = crate::gap::minimax_gap_with(&a, &hull, std::slice::from_ref(x), &solver)?;
        let best = relative(case, s.value, x);
        let g = &greedy[start + i];
        match (&best, g) {
            (GapValue::Exact(b), GapValue::Exact(gv)) => {
                not_worse &= b <= gv;
                equal += usize::from(b == gv);
            }
            _ => not_worse &= best.to_f64() <= g.to_f64() + 1e-9,
        }
    }
    let how = if exact { "LP" } else { "descent" };
    let detail = if exact {
        format!("{how} optimum <= greedy on {} probes, equal on {equal}", sub.len())
    } else {
        format!("{how} optimum <= greedy + 1e-9 on {} probes", sub.len())
    };
    rep.check("hull-vs-greedy", not_worse, detail);

    // Tail direction: slot unit vectors at the last inner coordinate.
    let witnesses: Vec<FinVec> = (1..=2 * n).map(|j| case.slot_witness(j)).collect();
    let half = q(1, 2);
    let lp = minimax_gap(&a, &hull, &witnesses)?;
    rep.check("minimax-lp", lp.value.at_least(&half, 0.0), format!("minimax over slot witnesses: {}", lp.value));
    let desc = minimax_descent(&a, &hull, &witnesses, opts.restarts, opts.seed)?;
    rep.check(
        "minimax-descent",
        desc.value >= 0.5 - 1e-6 && (desc.value - lp.value.to_f64()).abs() <= 1e-6,
        format!("descent {:.12} over {} restarts", desc.value, opts.restarts),
    );

    let crate::gap::Weights::Exact(lp_w) = &lp.weights else { unreachable!("exact solver") };
    let mut pig_ok = true;
    let mut combos: Vec<Vec<Q>> = vec![lp_w.clone()];
    for _ in 0..opts.samples {
        combos.push(simplex_point(&mut rng, sets.len(), 0.9));
    }
    for w in &combos {
        let cov = coverage(n, &sets, w)?;
        pig_ok &= cov.iter().sum::<Q>() == Q::from_integer(n.into());
        let slot = pigeonhole_witness(n, &sets, w)?;
        let comb = ConvexCombination::new(hull.clone(), w.clone())?;
        let g = relative(case, residual_gap(&a, &comb, &case.slot_witness(slot.slot))?, &case.slot_witness(slot.slot));
        pig_ok &= g.at_least(&half, 1e-9) && g == GapValue::Exact(Q::from_integer(1.into()) - &slot.coverage);
    }
    rep.check(
        "pigeonhole",
        pig_ok,
        format!("{} combinations: average coverage 1/2, witness slot gap >= 1/2", combos.len()),
    );

    let lp_comb = ConvexCombination::new(hull.clone(), lp_w.clone())?;
    let up_val = operator_gap(&a, &lp_comb, &witnesses)?;
    rep.check("lower<=upper", lp.value.to_f64() <= up_val.to_f64(), format!("{} <= {}", lp.value, up_val));
    rep.lower = Some(SubspaceLower { value: lp.value.clone(), witnesses });
    rep.upper = Some(SubspaceUpper {
        value: up_val,
        points: hull.iter().map(|h| h.label()).collect(),
        weights: lp.weights.clone(),
    });
    Ok(rep)
}
