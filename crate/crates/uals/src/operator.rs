//! Operators between truncated spaces and points of their convex hulls.

use std::collections::{BTreeMap, BTreeSet};

use jsm_core::{FinVec, Index, IndexScheme, Part, Q};
use num_traits::{One, Signed, Zero};

use crate::error::UalsError;
use crate::norm::BlockNorm;

/// A truncated space: the finitely many basis indices an operator may see.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    pub scheme: IndexScheme,
    pub basis: Vec<Index>,
    pub norm: BlockNorm,
}

impl Space {
    pub fn naturals(dim: u64, norm: BlockNorm) -> Space {
        Space { scheme: IndexScheme::Natural, basis: (1..=dim).map(Index::Nat).collect(), norm }
    }

    /// Slots `1..=2n` of layer `n`, each carrying `inner` coordinates.
    pub fn slots(n: u32, part: Part, inner: u64, norm: BlockNorm) -> Space {
        let mut basis = Vec::new();
        for slot in 1..=2 * n {
            for m in 1..=inner {
                basis.push(Index::mixed(n, part, slot, m));
            }
        }
        Space { scheme: IndexScheme::MixedSum, basis, norm }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn check(&self, x: &FinVec) -> Result<(), UalsError> {
        if x.scheme() != self.scheme {
            return Err(UalsError::Dimension(format!("vector over {}, space over {}", x.scheme(), self.scheme)));
        }
        if let Some(i) = x.support().find(|i| self.basis.binary_search(i).is_err()) {
            return Err(UalsError::Dimension(format!("index {i} outside the truncation")));
        }
        Ok(())
    }

    pub fn unit(&self, k: usize) -> FinVec {
        FinVec::unit(self.scheme, self.basis[k].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// How an operator acts. Structured rules expand to matrices on the
/// truncation via [`OperatorModel::expand`].
#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    /// Column images; absent columns map to zero.
    Matrix(BTreeMap<Index, FinVec>),
    Identity,
    /// `I_G`: slot `j` of the X part to slot `j` of the Y part for `j ∈ G`.
    Select(BTreeSet<u32>),
    /// `x ↦ (Σ odd x) e₁ + (Σ even x) e₂`.
    OddEven,
    /// `B_z^+ x = (Σ x) z`, `B_z^- x = (Σ odd x − Σ even x) z`.
    Ell1B { sign: Sign, z: [Q; 2] },
    /// `x* ⊗ x`: `y ↦ x*(y) x`.
    RankOne { functional: Vec<Q>, vector: Vec<Q> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorModel {
    pub domain: Space,
    pub codomain: Space,
    pub action: Action,
}

impl OperatorModel {
    pub fn new(domain: Space, codomain: Space, action: Action) -> OperatorModel {
        OperatorModel { domain, codomain, action }
    }

    pub fn label(&self) -> String {
        match &self.action {
            Action::Matrix(_) => "matrix".into(),
            Action::Identity => "I".into(),
            Action::Select(g) => {
                format!("I_{{{}}}", g.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","))
            }
            Action::OddEven => "A".into(),
            Action::Ell1B { sign, z } => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                format!("B{s}({},{})", jsm_core::num::fmt_rational(&z[0]), jsm_core::num::fmt_rational(&z[1]))
            }
            Action::RankOne { functional, vector } => {
                let f = |v: &[Q]| v.iter().map(jsm_core::num::fmt_rational).collect::<Vec<_>>().join(",");
                format!("({})x({})", f(functional), f(vector))
            }
        }
    }

    pub fn apply(&self, x: &FinVec) -> Result<FinVec, UalsError> {
        self.domain.check(x)?;
        let cod = self.codomain.scheme;
        let mut out = FinVec::zero(cod);
        match &self.action {
            Action::Matrix(cols) => {
                for (i, c) in x.iter() {
                    if let Some(col) = cols.get(i) {
                        out = out.lin_comb(&Q::one(), col, c)?;
                    }
                }
            }
            Action::Identity => {
                for (i, c) in x.iter() {
                    out.add_at(i.clone(), c);
                }
            }
            Action::Select(g) => {
                for (i, c) in x.iter() {
                    if let Index::Mixed { n, slot, inner, .. } = i {
                        if g.contains(slot) {
                            out.add_at(Index::mixed(*n, Part::Y, *slot, *inner), c);
                        }
                    }
                }
            }
            Action::OddEven => {
                for (i, c) in x.iter() {
                    if let Index::Nat(k) = i {
                        out.add_at(Index::Nat(2 - k % 2), c);
                    }
                }
            }
            Action::Ell1B { sign, z } => {
                let mut s = Q::zero();
                for (i, c) in x.iter() {
                    if let Index::Nat(k) = i {
                        if *sign == Sign::Minus && k % 2 == 0 {
                            s -= c;
                        } else {
                            s += c;
                        }
                    }
                }
                out.add_at(Index::Nat(1), &(&s * &z[0]));
                out.add_at(Index::Nat(2), &(&s * &z[1]));
            }
            Action::RankOne { functional, vector } => {
                let mut s = Q::zero();
                for (i, c) in x.iter() {
                    if let Index::Nat(k) = i {
                        if let Some(f) = functional.get(*k as usize - 1) {
                            s += f * c;
                        }
                    }
                }
                for (k, v) in vector.iter().enumerate() {
                    out.add_at(Index::Nat(k as u64 + 1), &(&s * v));
                }
            }
        }
        self.codomain.check(&out)?;
        Ok(out)
    }

    /// The same operator as an explicit matrix on the truncation.
    pub fn expand(&self) -> Result<OperatorModel, UalsError> {
        let mut cols = BTreeMap::new();
        for k in 0..self.domain.dim() {
            let img = self.apply(&self.domain.unit(k))?;
            if !img.is_empty() {
                cols.insert(self.domain.basis[k].clone(), img);
            }
        }
        Ok(OperatorModel::new(self.domain.clone(), self.codomain.clone(), Action::Matrix(cols)))
    }

    /// Dense matrix, rows indexed by the codomain basis.
    pub fn dense(&self) -> Result<Vec<Vec<Q>>, UalsError> {
        let mut m = vec![vec![Q::zero(); self.domain.dim()]; self.codomain.dim()];
        for k in 0..self.domain.dim() {
            let img = self.apply(&self.domain.unit(k))?;
            for (i, c) in img.iter() {
                let r = self.codomain.basis.binary_search(i).expect("checked by apply");
                m[r][k] = c.clone();
            }
        }
        Ok(m)
    }

    pub fn same_spaces(&self, other: &OperatorModel) -> bool {
        self.domain == other.domain && self.codomain == other.codomain
    }
}

/// `Σ λᵢ Bᵢ` with exact simplex weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCombination {
    pub points: Vec<OperatorModel>,
    pub weights: Vec<Q>,
}

impl ConvexCombination {
    pub fn new(points: Vec<OperatorModel>, weights: Vec<Q>) -> Result<ConvexCombination, UalsError> {
        if points.is_empty() {
            return Err(UalsError::EmptyHull);
        }
        if points.len() != weights.len() {
            return Err(UalsError::Weights(format!("{} points, {} weights", points.len(), weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(UalsError::Weights(format!("negative weight {}", jsm_core::num::fmt_rational(w))));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(UalsError::Weights(format!("sum {}", jsm_core::num::fmt_rational(&total))));
        }
        if points.iter().any(|p| !p.same_spaces(&points[0])) {
            return Err(UalsError::Dimension("hull points act between different spaces".into()));
        }
        Ok(ConvexCombination { points, weights })
    }

    pub fn single(point: OperatorModel) -> ConvexCombination {
        ConvexCombination { points: vec![point], weights: vec![Q::one()] }
    }

    /// Exact weights from floating point ones: dyadic values, renormalized.
    pub fn from_f64(points: Vec<OperatorModel>, weights: &[f64]) -> Result<ConvexCombination, UalsError> {
        let w: Vec<Q> = weights.iter().map(|v| Q::from_float(v.max(0.0)).unwrap_or_else(Q::zero)).collect();
        let total: Q = w.iter().sum();
        if total.is_zero() {
            return Err(UalsError::Weights("all weights vanish".into()));
        }
        ConvexCombination::new(points, w.iter().map(|v| v / &total).collect())
    }

    pub fn apply(&self, x: &FinVec) -> Result<FinVec, UalsError> {
        let mut out = FinVec::zero(self.points[0].codomain.scheme);
        for (p, w) in self.points.iter().zip(&self.weights) {
            if !w.is_zero() {
                out = out.lin_comb(&Q::one(), &p.apply(x)?, w)?;
            }
        }
        Ok(out)
    }

    /// Support of the combination: points with positive weight.
    pub fn active(&self) -> impl Iterator<Item = (&OperatorModel, &Q)> {
        self.points.iter().zip(&self.weights).filter(|(_, w)| !w.is_zero())
    }
}
