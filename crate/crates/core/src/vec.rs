use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::CoreError;
use crate::index::{Index, IndexScheme};
use crate::num::Q;

/// Finitely supported vector with exact coefficients. Zero coefficients are
/// never stored, so the key set is the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinVec {
    scheme: IndexScheme,
    entries: BTreeMap<Index, Q>,
}

impl FinVec {
    pub fn zero(scheme: IndexScheme) -> Self {
        FinVec { scheme, entries: BTreeMap::new() }
    }

    pub fn unit(scheme: IndexScheme, idx: Index) -> Self {
        let mut v = Self::zero(scheme);
        v.entries.insert(idx, Q::from_integer(1.into()));
        v
    }

    /// Builds a vector, rejecting invalid and repeated indices.
    pub fn from_entries<I>(scheme: IndexScheme, entries: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (Index, Q)>,
    {
        let mut v = Self::zero(scheme);
        let mut seen = std::collections::BTreeSet::new();
        for (idx, c) in entries {
            idx.validate(scheme)?;
            if !seen.insert(idx.clone()) {
                return Err(CoreError::DuplicateIndex(idx.to_string()));
            }
            if !c.is_zero() {
                v.entries.insert(idx, c);
            }
        }
        Ok(v)
    }

    /// Natural-scheme vector from coefficients at positions 1, 2, ...
    pub fn naturals(coeffs: &[Q]) -> Self {
        let mut v = Self::zero(IndexScheme::Natural);
        for (i, c) in coeffs.iter().enumerate() {
            v.set(Index::Nat(i as u64 + 1), c.clone());
        }
        v
    }

    pub fn scheme(&self) -> IndexScheme {
        self.scheme
    }

    pub fn get(&self, idx: &Index) -> Q {
        self.entries.get(idx).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, idx: Index, c: Q) {
        if c.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, c);
        }
    }

    pub fn add_at(&mut self, idx: Index, c: &Q) {
        let cur = self.get(&idx);
        self.set(idx, cur + c);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, &Q)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Index> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_scheme(&self, other: &FinVec) -> Result<(), CoreError> {
        if self.scheme != other.scheme {
            return Err(CoreError::SchemeMismatch(self.scheme.to_string(), other.scheme.to_string()));
        }
        Ok(())
    }

    pub fn scale(&self, s: &Q) -> FinVec {
        if s.is_zero() {
            return Self::zero(self.scheme);
        }
        FinVec {
            scheme: self.scheme,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
    }

    /// `a·self + b·other`, zeros pruned.
    pub fn lin_comb(&self, a: &Q, other: &FinVec, b: &Q) -> Result<FinVec, CoreError> {
        self.check_scheme(other)?;
        let mut out = self.scale(a);
        for (k, v) in &other.entries {
            out.add_at(k.clone(), &(v * b));
        }
        Ok(out)
    }

    pub fn add(&self, other: &FinVec) -> Result<FinVec, CoreError> {
        let one = Q::from_integer(1.into());
        self.lin_comb(&one, other, &one)
    }

    pub fn sub(&self, other: &FinVec) -> Result<FinVec, CoreError> {
        let one = Q::from_integer(1.into());
        self.lin_comb(&one, other, &-one.clone())
    }

    pub fn restrict<F: Fn(&Index) -> bool>(&self, keep: F) -> FinVec {
        FinVec {
            scheme: self.scheme,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Relabels indices; colliding targets are summed.
    pub fn map_indices<F>(&self, scheme: IndexScheme, f: F) -> Result<FinVec, CoreError>
    where
        F: Fn(&Index) -> Result<Index, CoreError>,
    {
        let mut out = Self::zero(scheme);
        for (k, v) in &self.entries {
            let t = f(k)?;
            t.validate(scheme)?;
            out.add_at(t, v);
        }
        Ok(out)
    }

    pub fn l1(&self) -> Q {
        self.entries.values().map(|v| v.abs()).fold(Q::zero(), |a, b| a + b)
    }

    pub fn l2_sq(&self) -> Q {
        self.entries.values().map(|v| v * v).fold(Q::zero(), |a, b| a + b)
    }

    pub fn max_abs(&self) -> Q {
        self.entries.values().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }
}

/// `α·a + β·b` for two vectors over one scheme.
pub fn vec_arith(a: &FinVec, b: &FinVec, alpha: &Q, beta: &Q) -> Result<FinVec, CoreError> {
    a.lin_comb(alpha, b, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qi};

    fn nat(v: &[(u64, Q)]) -> FinVec {
        FinVec::from_entries(IndexScheme::Natural, v.iter().map(|(i, c)| (Index::Nat(*i), c.clone())))
            .unwrap()
    }

    #[test]
    fn cancellation() {
        let a = nat(&[(1, qi(1)), (2, qi(1))]);
        let b = nat(&[(2, qi(1))]);
        let r = vec_arith(&a, &b, &qi(1), &qi(-1)).unwrap();
        assert_eq!(r, nat(&[(1, qi(1))]));
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn annihilation_and_exact_sum() {
        let a = nat(&[(1, qi(3))]);
        assert!(a.scale(&qi(0)).is_empty());
        let s = vec_arith(&nat(&[(1, q(1, 3))]), &nat(&[(1, q(1, 6))]), &qi(1), &qi(1)).unwrap();
        assert_eq!(s.get(&Index::Nat(1)), q(1, 2));
    }

    #[test]
    fn errors() {
        let dup = FinVec::from_entries(
            IndexScheme::Natural,
            vec![(Index::Nat(1), qi(1)), (Index::Nat(1), q(1, 2))],
        );
        assert!(matches!(dup, Err(CoreError::DuplicateIndex(_))));
        let a = FinVec::zero(IndexScheme::Natural);
        let b = FinVec::zero(IndexScheme::Dyadic);
        assert!(a.add(&b).is_err());
    }
}
