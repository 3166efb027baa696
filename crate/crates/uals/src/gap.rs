//! Pointwise and minimax gaps `min_{B ∈ co(hull)} max_w ‖(A − B)w‖`.
//!
//! When every block of the residual is either polyhedral or collinear with
//! a rational-norm direction the problem is an exact linear program over
//! the hull weights. Otherwise it falls back to floating point descent.

use std::collections::BTreeSet;
use std::fmt;

use jsm_core::num::{decimal, fmt_rational, to_f64};
use jsm_core::{FinVec, Index, Q};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::descent::{self, DescentResult, Piece};
use crate::error::UalsError;
use crate::norm::{block_key, Layout};
use crate::operator::{ConvexCombination, OperatorModel};
use crate::simplex::{Lp, Relation};

#[derive(Clone, Debug, PartialEq)]
pub enum GapValue {
    Exact(Q),
    Approx(f64),
}

impl GapValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            GapValue::Exact(q) => to_f64(q),
            GapValue::Approx(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GapValue::Exact(_))
    }

    /// `self ≥ bound`, exactly when possible, else with tolerance `tol`.
    pub fn at_least(&self, bound: &Q, tol: f64) -> bool {
        match self {
            GapValue::Exact(q) => q >= bound,
            GapValue::Approx(v) => *v >= to_f64(bound) - tol,
        }
    }

    pub fn at_most(&self, bound: &Q, tol: f64) -> bool {
        match self {
            GapValue::Exact(q) => q <= bound,
            GapValue::Approx(v) => *v <= to_f64(bound) + tol,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GapValue::Exact(q) => json!({"exact": true, "value": fmt_rational(q), "decimal": decimal(q, 12)}),
            GapValue::Approx(v) => json!({"exact": false, "value": format!("{v:.12}")}),
        }
    }
}

impl fmt::Display for GapValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapValue::Exact(q) => write!(f, "{}", fmt_rational(q)),
            GapValue::Approx(v) => write!(f, "{v:.12}~"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Exact(Vec<Q>),
    Approx(Vec<f64>),
}

impl Weights {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Weights::Exact(w) => w.iter().map(to_f64).collect(),
            Weights::Approx(w) => w.clone(),
        }
    }

    pub fn combination(&self, hull: &[OperatorModel]) -> Result<ConvexCombination, UalsError> {
        match self {
            Weights::Exact(w) => ConvexCombination::new(hull.to_vec(), w.clone()),
            Weights::Approx(w) => ConvexCombination::from_f64(hull.to_vec(), w),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Weights::Exact(w) => Value::from(w.iter().map(fmt_rational).collect::<Vec<_>>()),
            Weights::Approx(w) => Value::from(w.iter().map(|v| format!("{v:.12}")).collect::<Vec<_>>()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapSolution {
    pub value: GapValue,
    pub weights: Weights,
    pub descent: Option<DescentResult>,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Skip the exact reduction even when it applies.
    pub force_descent: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { restarts: 20, seed: 0, force_descent: false }
    }
}

/// `‖(A − B)x‖` for one combination.
pub fn residual_gap(a: &OperatorModel, b: &ConvexCombination, x: &FinVec) -> Result<GapValue, UalsError> {
    if !a.same_spaces(&b.points[0]) {
        return Err(UalsError::Dimension("hull and A act between different spaces".into()));
    }
    let r = a.apply(x)?.sub(&b.apply(x)?)?;
    let norm = &a.codomain.norm;
    Ok(match norm.exact(&r) {
        Some(v) => GapValue::Exact(v),
        None => GapValue::Approx(norm.value(&r)),
    })
}

/// `max_w ‖(A − B)w‖`; with the extreme points of the domain ball as
/// witnesses this is the operator norm of `A − B`.
pub fn operator_gap(a: &OperatorModel, b: &ConvexCombination, witnesses: &[FinVec]) -> Result<GapValue, UalsError> {
    if witnesses.is_empty() {
        return Err(UalsError::NoWitnesses);
    }
    let mut best: Option<GapValue> = None;
    for w in witnesses {
        let g = residual_gap(a, b, w)?;
        best = Some(match best {
            None => g,
            Some(cur) => max_gap(cur, g),
        });
    }
    Ok(best.expect("nonempty"))
}

fn max_gap(x: GapValue, y: GapValue) -> GapValue {
    match (x, y) {
        (GapValue::Exact(p), GapValue::Exact(q)) => GapValue::Exact(p.max(q)),
        (x, y) => GapValue::Approx(x.to_f64().max(y.to_f64())),
    }
}

pub fn pointwise_gap(a: &OperatorModel, hull: &[OperatorModel], x: &FinVec) -> Result<GapSolution, UalsError> {
    minimax_gap(a, hull, std::slice::from_ref(x))
}

pub fn minimax_gap(a: &OperatorModel, hull: &[OperatorModel], witnesses: &[FinVec]) -> Result<GapSolution, UalsError> {
    minimax_gap_with(a, hull, witnesses, &SolverOptions::default())
}

struct Images {
    a: Vec<FinVec>,
    b: Vec<Vec<FinVec>>,
}

fn images(a: &OperatorModel, hull: &[OperatorModel], witnesses: &[FinVec]) -> Result<Images, UalsError> {
    if witnesses.is_empty() {
        return Err(UalsError::NoWitnesses);
    }
    if hull.is_empty() {
        return Err(UalsError::EmptyHull);
    }
    if let Some(h) = hull.iter().find(|h| !h.same_spaces(a)) {
        return Err(UalsError::Dimension(format!("hull point {} acts between different spaces", h.label())));
    }
    let a_img = witnesses.iter().map(|w| a.apply(w)).collect::<Result<Vec<_>, _>>()?;
    let b_img = witnesses
        .iter()
        .map(|w| hull.iter().map(|h| h.apply(w)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Images { a: a_img, b: b_img })
}

pub fn minimax_gap_with(
    a: &OperatorModel,
    hull: &[OperatorModel],
    witnesses: &[FinVec],
    opts: &SolverOptions,
) -> Result<GapSolution, UalsError> {
    let img = images(a, hull, witnesses)?;
    if !opts.force_descent {
        if let Some(lp) = reduce(a, &img, hull.len()) {
            let sol = lp.minimize()?;
            let weights = sol.x[..hull.len()].to_vec();
            return Ok(GapSolution { value: GapValue::Exact(sol.value), weights: Weights::Exact(weights), descent: None });
        }
    }
    let d = descend(a, &img, hull.len(), opts);
    Ok(GapSolution { value: GapValue::Approx(d.value), weights: Weights::Approx(d.weights.clone()), descent: Some(d) })
}

/// Descent only, for cross-checking the exact solver.
pub fn minimax_descent(
    a: &OperatorModel,
    hull: &[OperatorModel],
    witnesses: &[FinVec],
    restarts: usize,
    seed: u64,
) -> Result<DescentResult, UalsError> {
    let img = images(a, hull, witnesses)?;
    Ok(descend(a, &img, hull.len(), &SolverOptions { restarts, seed, force_descent: true }))
}

fn descend(a: &OperatorModel, img: &Images, k: usize, opts: &SolverOptions) -> DescentResult {
    let (p, q) = a.codomain.norm.dense();
    let pieces: Vec<Piece> = img
        .a
        .iter()
        .zip(&img.b)
        .map(|(aw, bw)| {
            let coords = support(aw, bw);
            let keys: Vec<_> = coords.iter().map(block_key).collect::<BTreeSet<_>>().into_iter().collect();
            let block = coords.iter().map(|c| keys.binary_search(&block_key(c)).unwrap()).collect();
            let dense = |v: &FinVec| coords.iter().map(|c| to_f64(&v.get(c))).collect::<Vec<_>>();
            Piece {
                a: dense(aw),
                b: bw.iter().map(dense).collect(),
                layout: Layout { block, n_blocks: keys.len(), p, q },
            }
        })
        .collect();
    let mut rng = jsm_core::random::seeded(opts.seed);
    descent::minimize(&pieces, k, opts.restarts, &mut rng)
}

fn support(a: &FinVec, b: &[FinVec]) -> Vec<Index> {
    let mut s: BTreeSet<Index> = a.support().cloned().collect();
    for v in b {
        s.extend(v.support().cloned());
    }
    s.into_iter().collect()
}

/// `weight · |alpha − Σ λᵢ betaᵢ|`.
struct Line {
    weight: Q,
    alpha: Q,
    beta: Vec<Q>,
}

struct Block {
    lines: Vec<Line>,
    sum: bool,
}

fn reduce(a: &OperatorModel, img: &Images, k: usize) -> Option<Lp> {
    let norm = &a.codomain.norm;
    let mut pieces: Vec<Vec<Block>> = Vec::new();
    for (aw, bw) in img.a.iter().zip(&img.b) {
        let coords = support(aw, bw);
        let keys: BTreeSet<_> = coords.iter().map(block_key).collect();
        let mut blocks = Vec::new();
        for key in keys {
            let cs: Vec<&Index> = coords.iter().filter(|c| block_key(c) == key).collect();
            let vecs: Vec<Vec<Q>> = std::iter::once(aw)
                .chain(bw.iter())
                .map(|v| cs.iter().map(|c| v.get(c)).collect())
                .collect();
            blocks.push(reduce_block(norm, &vecs)?);
        }
        if blocks.len() > 1 && !norm.outer.polyhedral() {
            return None;
        }
        pieces.push(blocks);
    }
    let outer_sum = norm.outer != crate::norm::Exponent::Inf;

    let mut lp = Lp::new(k + 1);
    let t = k;
    lp.set_cost(t, Q::one());
    lp.add((0..k).map(|i| (i, Q::one())).collect(), Relation::Eq, Q::one());
    for blocks in &pieces {
        if outer_sum && blocks.len() > 1 {
            let s: Vec<usize> = blocks.iter().map(|_| lp.add_var()).collect();
            let mut row = vec![(t, Q::one())];
            row.extend(s.iter().map(|&v| (v, -Q::one())));
            lp.add(row, Relation::Ge, Q::zero());
            for (b, v) in blocks.iter().zip(s) {
                bound(&mut lp, v, b);
            }
        } else {
            for b in blocks {
                bound(&mut lp, t, b);
            }
        }
    }
    Some(lp)
}

fn reduce_block(norm: &crate::norm::BlockNorm, vecs: &[Vec<Q>]) -> Option<Block> {
    let k = vecs.len() - 1;
    // All images equal: the residual is (1 − Σλ)·a = 0 on the simplex.
    if vecs.iter().all(|v| *v == vecs[0]) {
        return Some(Block { lines: vec![], sum: false });
    }
    let dir = vecs.iter().find(|v| v.iter().any(|c| !c.is_zero())).expect("not all equal");
    let pivot = dir.iter().position(|c| !c.is_zero()).expect("nonzero");
    let scalars: Option<Vec<Q>> = vecs
        .iter()
        .map(|v| {
            let s = &v[pivot] / &dir[pivot];
            v.iter().zip(dir).all(|(x, d)| *x == &s * d).then_some(s)
        })
        .collect();
    if let Some(s) = scalars {
        if let Some(w) = norm.inner_exact(dir) {
            return Some(Block { lines: vec![Line { weight: w, alpha: s[0].clone(), beta: s[1..].to_vec() }], sum: false });
        }
    }
    if !norm.inner.polyhedral() {
        return None;
    }
    let lines = (0..dir.len())
        .map(|c| Line { weight: Q::one(), alpha: vecs[0][c].clone(), beta: (0..k).map(|i| vecs[i + 1][c].clone()).collect() })
        .collect();
    Some(Block { lines, sum: norm.inner != crate::norm::Exponent::Inf })
}

/// Adds rows forcing `v ≥` the block value.
fn bound(lp: &mut Lp, v: usize, b: &Block) {
    if b.sum && b.lines.len() > 1 {
        let us: Vec<usize> = b.lines.iter().map(|_| lp.add_var()).collect();
        for (line, &u) in b.lines.iter().zip(&us) {
            abs_rows(lp, u, line);
        }
        let mut row = vec![(v, Q::one())];
        row.extend(us.iter().map(|&u| (u, -Q::one())));
        lp.add(row, Relation::Ge, Q::zero());
    } else {
        for line in &b.lines {
            abs_rows(lp, v, line);
        }
    }
}

/// `u ≥ ±w(α − Σλβ)`.
fn abs_rows(lp: &mut Lp, u: usize, line: &Line) {
    for sign in [Q::one(), -Q::one()] {
        let mut row = vec![(u, Q::one())];
        for (i, b) in line.beta.iter().enumerate() {
            if !b.is_zero() {
                row.push((i, &sign * &line.weight * b));
            }
        }
        lp.add(row, Relation::Ge, &sign * &line.weight * &line.alpha);
    }
}
