//! The space `𝒳 = (Σ_n (X_n ⊕ Y_n))_2` with `X_n = (Σ_{j≤2n} ℓ₂)_1` and
//! `Y_n = (Σ_{j≤2n} ℓ₂)_∞`.
//!
//! Squared norms mix rationals with square roots of slot norms, so they are
//! returned as [`Surd`] values.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use jsm_core::{FinVec, Index, IndexScheme, Part, Q};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::SpaceError;

const TRIAL_LIMIT: u64 = 1 << 20;

/// `rational + Σ c_r √r` with distinct squarefree radicands `r > 1`.
///
/// Radicands are reduced by trial division up to 2²⁰ followed by a perfect
/// square test, which is complete for radicands below 2⁶⁰.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Surd {
    rational: Q,
    terms: BTreeMap<BigUint, Q>,
}

/// Splits `n` into `(s, r)` with `n = s² r`.
fn square_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut outside = BigUint::one();
    let mut inside = BigUint::one();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && BigUint::from(p * p) <= rest {
        let pp = BigUint::from(p * p);
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            outside *= p;
        }
        if (&rest % p).is_zero() {
            rest /= p;
            inside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        outside *= root;
    } else {
        inside *= rest;
    }
    (outside, inside)
}

impl Surd {
    pub fn rational(x: Q) -> Self {
        Surd { rational: x, terms: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Surd::default()
    }

    /// `√x` for a nonnegative rational `x`.
    pub fn sqrt(x: &Q) -> Self {
        assert!(!x.is_negative(), "square root of a negative rational");
        if x.is_zero() {
            return Surd::zero();
        }
        // √(a/b) = √(ab)/b
        let ab = (x.numer() * x.denom()).to_biguint().unwrap_or_default();
        let (s, r) = square_split(&ab);
        let c = Q::new(BigInt::from(s), x.denom().clone());
        Surd::zero().plus_term(r, c)
    }

    fn plus_term(mut self, radicand: BigUint, c: Q) -> Self {
        if radicand.is_one() {
            self.rational += c;
            return self;
        }
        let e = self.terms.entry(radicand).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        self
    }

    pub fn rational_part(&self) -> &Q {
        &self.rational
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Q)> {
        self.terms.iter()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.terms.is_empty().then_some(&self.rational)
    }

    pub fn add(&self, other: &Surd) -> Surd {
        let mut out = self.clone();
        out.rational += &other.rational;
        for (r, c) in &other.terms {
            out = out.plus_term(r.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Surd {
        Surd { rational: -self.rational.clone(), terms: self.terms.iter().map(|(r, c)| (r.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Q) -> Surd {
        if s.is_zero() {
            return Surd::zero();
        }
        Surd { rational: &self.rational * s, terms: self.terms.iter().map(|(r, c)| (r.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        let mut out = Surd::rational(&self.rational * &other.rational);
        for (r, c) in &other.terms {
            out = out.plus_term(r.clone(), c * &self.rational);
        }
        for (r, c) in &self.terms {
            out = out.plus_term(r.clone(), c * &other.rational);
            for (r2, c2) in &other.terms {
                let (s, rest) = square_split(&(r * r2));
                out = out.plus_term(rest, c * c2 * Q::from_integer(BigInt::from(s)));
            }
        }
        out
    }

    /// Approximation `a` with `|self − a| ≤ 10^{-digits}·(1 + Σ|c_r|)`.
    pub fn approx(&self, digits: u32) -> Q {
        let scale = BigUint::from(10u32).pow(digits);
        let mut acc = self.rational.clone();
        for (r, c) in &self.terms {
            let root = (r * &scale * &scale).sqrt();
            acc += c * Q::new(BigInt::from(root), BigInt::from(scale.clone()));
        }
        acc
    }

    fn error_weight(&self) -> Q {
        self.terms.values().map(|c| c.abs()).sum::<Q>() + Q::one()
    }

    /// Exact sign. Irrational values are separated from zero by refining
    /// the approximation; square roots of distinct squarefree integers are
    /// linearly independent, so a nonempty term list is never zero.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return self.rational.cmp(&Q::zero());
        }
        let mut digits = 40;
        loop {
            let a = self.approx(digits);
            let err = self.error_weight() / Q::from_integer(BigInt::from(10u32).pow(digits));
            if a > err {
                return Ordering::Greater;
            }
            if a < -err {
                return Ordering::Less;
            }
            digits *= 2;
        }
    }

    pub fn cmp_rational(&self, x: &Q) -> Ordering {
        self.sub(&Surd::rational(x.clone())).signum()
    }

    pub fn cmp(&self, other: &Surd) -> Ordering {
        self.sub(other).signum()
    }

    pub fn decimal12(&self) -> String {
        jsm_core::num::decimal12(&self.approx(30))
    }

    pub fn to_f64(&self) -> f64 {
        jsm_core::num::to_f64(&self.approx(30))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() || self.terms.is_empty() {
            parts.push(jsm_core::num::fmt_rational(&self.rational));
        }
        for (r, c) in &self.terms {
            parts.push(format!("{}*sqrt({r})", jsm_core::num::fmt_rational(c)));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Squared `ℓ₂` norms of every nonzero slot, keyed by `(n, part, slot)`.
pub fn slot_norms_sq(x: &FinVec) -> Result<BTreeMap<(u32, Part, u32), Q>, SpaceError> {
    if x.scheme() != IndexScheme::MixedSum {
        return Err(SpaceError::Scheme { expected: "mixed", got: x.scheme().to_string() });
    }
    let mut slots: BTreeMap<(u32, Part, u32), Q> = BTreeMap::new();
    for (idx, c) in x.iter() {
        let Index::Mixed { n, part, slot, .. } = idx else {
            return Err(SpaceError::Scheme { expected: "mixed", got: idx.to_string() });
        };
        idx.validate(IndexScheme::MixedSum)?;
        *slots.entry((*n, *part, *slot)).or_insert_with(Q::zero) += c * c;
    }
    Ok(slots)
}

/// `‖x‖² = Σ_n ((Σ_j ‖x_{n(j)}‖)² + max_j ‖y_{n(j)}‖²)`.
pub fn calx_norm_sq(x: &FinVec) -> Result<Surd, SpaceError> {
    let slots = slot_norms_sq(x)?;
    let mut blocks: BTreeMap<u32, (Surd, Q)> = BTreeMap::new();
    for ((n, part, _), s) in &slots {
        let b = blocks.entry(*n).or_insert_with(|| (Surd::zero(), Q::zero()));
        match part {
            Part::X => b.0 = b.0.add(&Surd::sqrt(s)),
            Part::Y => b.1 = b.1.clone().max(s.clone()),
        }
    }
    let mut total = Surd::zero();
    for (sum, ymax) in blocks.values() {
        total = total.add(&sum.mul(sum)).add(&Surd::rational(ymax.clone()));
    }
    Ok(total)
}

/// Norm of `x` as a double, for tolerance-level comparisons.
pub fn calx_norm(x: &FinVec) -> Result<f64, SpaceError> {
    Ok(calx_norm_sq(x)?.to_f64().max(0.0).sqrt())
}

/// Largest slot index in use, for size checks.
pub fn max_block(x: &FinVec) -> Option<u32> {
    x.support().filter_map(|i| if let Index::Mixed { n, .. } = i { Some(*n) } else { None }).max()
}
