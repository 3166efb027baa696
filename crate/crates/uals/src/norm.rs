//! Block norms `(⊕ ℓ_inner)_outer` on finite vectors.
//!
//! Blocks are the slots of a mixed-sum index; every other scheme is a single
//! block, so a flat `ℓp` is just `inner = outer = p`.

use std::collections::BTreeMap;
use std::fmt;

use jsm_core::num::{abs, sqrt_exact, to_f64};
use jsm_core::{FinVec, Index, Q};
use num_traits::{One, Signed, Zero};

use crate::error::UalsError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Finite(Q),
    Inf,
}

impl Exponent {
    pub fn finite(p: Q) -> Result<Exponent, UalsError> {
        if p < Q::one() {
            return Err(UalsError::Exponent(jsm_core::num::fmt_rational(&p)));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn parse(s: &str) -> Result<Exponent, UalsError> {
        match s.trim() {
            "inf" | "infinity" => Ok(Exponent::Inf),
            t => Exponent::finite(jsm_core::num::parse_rational(t)?),
        }
    }

    fn is(&self, n: i64) -> bool {
        matches!(self, Exponent::Finite(p) if *p == Q::from_integer(n.into()))
    }

    fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => to_f64(p),
            Exponent::Inf => f64::INFINITY,
        }
    }

    /// Polyhedral exponents: the norm is a max of linear forms.
    pub fn polyhedral(&self) -> bool {
        self.is(1) || *self == Exponent::Inf
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Inf => write!(f, "inf"),
            Exponent::Finite(p) if p.is_integer() => write!(f, "{}", p.numer()),
            Exponent::Finite(p) => write!(f, "{}/{}", p.numer(), p.denom()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockNorm {
    pub inner: Exponent,
    pub outer: Exponent,
}

pub type BlockKey = (u32, u32);

pub fn block_key(idx: &Index) -> BlockKey {
    match idx {
        Index::Mixed { n, slot, .. } => (*n, *slot),
        _ => (0, 0),
    }
}

impl BlockNorm {
    pub fn new(inner: Exponent, outer: Exponent) -> BlockNorm {
        BlockNorm { inner, outer }
    }

    pub fn flat(p: Exponent) -> BlockNorm {
        BlockNorm { inner: p.clone(), outer: p }
    }

    pub fn l1() -> BlockNorm {
        BlockNorm::flat(Exponent::Finite(Q::one()))
    }

    pub fn linf() -> BlockNorm {
        BlockNorm::flat(Exponent::Inf)
    }

    pub fn name(&self) -> String {
        if self.inner == self.outer {
            format!("l{}", self.inner)
        } else {
            format!("(l{})_{}", self.inner, self.outer)
        }
    }

    pub fn blocks(x: &FinVec) -> BTreeMap<BlockKey, Vec<Q>> {
        let mut out: BTreeMap<BlockKey, Vec<Q>> = BTreeMap::new();
        for (i, c) in x.iter() {
            out.entry(block_key(i)).or_default().push(c.clone());
        }
        out
    }

    /// Exact value of the inner norm of one block, when it is rational.
    pub fn inner_exact(&self, coeffs: &[Q]) -> Option<Q> {
        exact_p(&self.inner, coeffs.iter().map(abs).collect())
    }

    /// Exact norm, `None` when the value is not certifiably rational.
    pub fn exact(&self, x: &FinVec) -> Option<Q> {
        let inner: Option<Vec<Q>> = BlockNorm::blocks(x).values().map(|b| self.inner_exact(b)).collect();
        exact_p(&self.outer, inner?)
    }

    pub fn value(&self, x: &FinVec) -> f64 {
        let inner: Vec<f64> = BlockNorm::blocks(x)
            .values()
            .map(|b| lp_f64(&b.iter().map(to_f64).collect::<Vec<_>>(), self.inner.as_f64()))
            .collect();
        lp_f64(&inner, self.outer.as_f64())
    }

    pub(crate) fn dense(&self) -> (f64, f64) {
        (self.inner.as_f64(), self.outer.as_f64())
    }
}

fn exact_p(p: &Exponent, vals: Vec<Q>) -> Option<Q> {
    let nz: Vec<Q> = vals.into_iter().filter(|v| !v.is_zero()).map(|v| v.abs()).collect();
    if nz.len() <= 1 {
        return Some(nz.into_iter().next().unwrap_or_else(Q::zero));
    }
    match p {
        Exponent::Inf => nz.into_iter().max(),
        _ if p.is(1) => Some(nz.into_iter().sum()),
        _ if p.is(2) => sqrt_exact(&nz.iter().map(|v| v * v).sum()),
        _ => None,
    }
}

/// `ℓp` norm of a slice, scaled by the largest entry to stay in range.
pub fn lp_f64(a: &[f64], p: f64) -> f64 {
    let m = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 || p.is_infinite() {
        return m;
    }
    m * a.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Dense block layout used by the floating point solvers.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub block: Vec<usize>,
    pub n_blocks: usize,
    pub p: f64,
    pub q: f64,
}

impl Layout {
    pub fn norm(&self, r: &[f64]) -> f64 {
        lp_f64(&self.block_values(r), self.q)
    }

    fn block_values(&self, r: &[f64]) -> Vec<f64> {
        let mut groups = vec![Vec::new(); self.n_blocks];
        for (k, v) in r.iter().enumerate() {
            groups[self.block[k]].push(*v);
        }
        groups.iter().map(|g| lp_f64(g, self.p)).collect()
    }

    /// A subgradient of the norm at `r`.
    pub fn gradient(&self, r: &[f64]) -> Vec<f64> {
        let b = self.block_values(r);
        let total = lp_f64(&b, self.q);
        let mut g = vec![0.0; r.len()];
        if total == 0.0 {
            return g;
        }
        let outer_w: Vec<f64> = if self.q.is_infinite() {
            let top = argmax(&b);
            (0..b.len()).map(|i| if i == top { 1.0 } else { 0.0 }).collect()
        } else {
            b.iter().map(|v| (v / total).powf(self.q - 1.0)).collect()
        };
        for blk in 0..self.n_blocks {
            if b[blk] == 0.0 || outer_w[blk] == 0.0 {
                continue;
            }
            let ks: Vec<usize> = (0..r.len()).filter(|&k| self.block[k] == blk).collect();
            if self.p.is_infinite() {
                let vals: Vec<f64> = ks.iter().map(|&k| r[k].abs()).collect();
                let k = ks[argmax(&vals)];
                g[k] = outer_w[blk] * r[k].signum();
            } else {
                for &k in &ks {
                    if r[k] != 0.0 {
                        g[k] = outer_w[blk] * r[k].signum() * (r[k].abs() / b[blk]).powf(self.p - 1.0);
                    }
                }
            }
        }
        g
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}
