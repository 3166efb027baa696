//! Projected subgradient descent on the simplex for `min_λ max_w ‖a_w − Σ λᵢ b_iw‖`.
//!
//! Polyak steps toward a target level `f_best − δ`; `δ` halves whenever the
//! method stalls. A pass ends once `δ` is below `1e-12 · f_best`, and passes
//! repeat from the best point until one no longer improves.

use rand::Rng;

use crate::norm::Layout;

#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub a: Vec<f64>,
    /// `b[i][k]`: coordinate `k` of hull point `i` applied to the witness.
    pub b: Vec<Vec<f64>>,
    pub layout: Layout,
}

impl Piece {
    fn residual(&self, lambda: &[f64]) -> Vec<f64> {
        let mut r = self.a.clone();
        for (bi, l) in self.b.iter().zip(lambda) {
            if *l != 0.0 {
                for (rk, bk) in r.iter_mut().zip(bi) {
                    *rk -= l * bk;
                }
            }
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentResult {
    pub value: f64,
    pub weights: Vec<f64>,
    /// Best value of every restart, for judging agreement.
    pub restarts: Vec<f64>,
    pub iterations: usize,
}

impl DescentResult {
    /// Spread of the restart values relative to the best one.
    pub fn spread(&self) -> f64 {
        let hi = self.restarts.iter().cloned().fold(f64::MIN, f64::max);
        (hi - self.value) / self.value.abs().max(1.0)
    }
}

pub(crate) fn objective(pieces: &[Piece], lambda: &[f64]) -> (f64, Vec<f64>) {
    let mut best = (f64::MIN, 0usize, Vec::new());
    for (w, p) in pieces.iter().enumerate() {
        let r = p.residual(lambda);
        let v = p.layout.norm(&r);
        if v > best.0 {
            best = (v, w, r);
        }
    }
    let (v, w, r) = best;
    let p = &pieces[w];
    let gn = p.layout.gradient(&r);
    let g = p.b.iter().map(|bi| -bi.iter().zip(&gn).map(|(x, y)| x * y).sum::<f64>()).collect();
    (v, g)
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (j, uj) in u.iter().enumerate() {
        css += uj;
        let t = (css - 1.0) / (j as f64 + 1.0);
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

const MAX_ITERS: usize = 400_000;
/// Iterations without getting halfway to the target before `δ` halves.
const STALL: usize = 300;

/// One pass of the level method from `start`, until `δ` is negligible.
fn pass(pieces: &[Piece], start: Vec<f64>, budget: usize) -> (f64, Vec<f64>, usize) {
    let mut lambda = start;
    let (mut f, mut g) = objective(pieces, &lambda);
    let (mut f_best, mut best) = (f, lambda.clone());
    let mut delta = 0.5 * f.abs().max(1e-3);
    let mut anchor = f_best;
    let mut stall = 0;
    let mut iters = 0;
    while iters < budget && delta > 1e-12 * f_best.abs().max(1e-3) {
        iters += 1;
        let gg: f64 = g.iter().map(|x| x * x).sum();
        if gg == 0.0 {
            break;
        }
        let step = (f - (f_best - delta)) / gg;
        let moved: Vec<f64> = lambda.iter().zip(&g).map(|(l, gi)| l - step * gi).collect();
        lambda = project_simplex(&moved);
        (f, g) = objective(pieces, &lambda);
        if f < f_best {
            f_best = f;
            best = lambda.clone();
        }
        if f_best <= anchor - delta / 2.0 {
            anchor = f_best;
            stall = 0;
        } else {
            stall += 1;
            if stall > STALL {
                delta /= 2.0;
                stall = 0;
                anchor = f_best;
                lambda = best.clone();
                (f, g) = objective(pieces, &lambda);
            }
        }
    }
    (f_best, best, iters)
}

/// Passes warm-started from the best point until one improves the value by
/// less than `1e-12` relative.
fn run(pieces: &[Piece], start: Vec<f64>) -> (f64, Vec<f64>, usize) {
    let (mut f, mut best, mut iters) = pass(pieces, start, MAX_ITERS);
    while iters < MAX_ITERS {
        let (f2, b2, it) = pass(pieces, best.clone(), MAX_ITERS - iters);
        iters += it;
        let improved = f - f2 > 1e-12 * f.abs().max(1e-3);
        if f2 < f {
            (f, best) = (f2, b2);
        }
        if !improved {
            break;
        }
    }
    (f, best, iters)
}

/// Barycenter first, then `restarts − 1` random starting points.
pub(crate) fn minimize<R: Rng>(pieces: &[Piece], k: usize, restarts: usize, rng: &mut R) -> DescentResult {
    let mut out = DescentResult { value: f64::INFINITY, weights: vec![], restarts: vec![], iterations: 0 };
    for r in 0..restarts.max(1) {
        let start = if r == 0 {
            vec![1.0 / k as f64; k]
        } else {
            let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let s: f64 = e.iter().sum();
            e.iter().map(|x| x / s).collect()
        };
        let (v, w, it) = run(pieces, start);
        out.iterations += it;
        out.restarts.push(v);
        if v < out.value {
            out.value = v;
            out.weights = w;
        }
    }
    out
}
