//! Ambient spaces and norm values that stay exact when the oracle allows.

use std::cmp::Ordering;

use jsm_core::num::{fmt_rational, to_f64};
use jsm_core::{FinVec, IndexScheme, Q};
use jsm_spaces::mixed::lp;
use jsm_spaces::{james_norm_sq, jt_norm_sq};
use num_traits::{One, Signed, Zero};

use crate::error::AsymError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    Lp(Q),
    James,
    Jt,
}

impl Ambient {
    pub fn name(&self) -> String {
        match self {
            Ambient::Lp(p) => format!("l{}", if p.is_integer() { p.to_string() } else { fmt_rational(p) }),
            Ambient::James => "james".into(),
            Ambient::Jt => "jt".into(),
        }
    }

    /// `l2`, `l3/2`, `james` or `jt`.
    pub fn parse(s: &str) -> Result<Ambient, AsymError> {
        match s {
            "james" => Ok(Ambient::James),
            "jt" => Ok(Ambient::Jt),
            _ => {
                let p = s
                    .strip_prefix('l')
                    .and_then(|p| jsm_core::num::parse_rational(p).ok())
                    .filter(|p| *p >= Q::one())
                    .ok_or_else(|| AsymError::UnknownAmbient(s.into()))?;
                Ok(Ambient::Lp(p))
            }
        }
    }

    pub fn scheme(&self) -> IndexScheme {
        match self {
            Ambient::Jt => IndexScheme::Dyadic,
            _ => IndexScheme::Natural,
        }
    }

    pub fn norm(&self, x: &FinVec) -> Result<NormValue, AsymError> {
        if x.scheme() != self.scheme() {
            return Err(AsymError::Ambient { expected: self.scheme().to_string(), got: x.scheme().to_string() });
        }
        Ok(match self {
            Ambient::James => NormValue::Exact(james_norm_sq(x)?.value),
            Ambient::Jt => NormValue::Exact(jt_norm_sq(x)?.value),
            Ambient::Lp(p) => coeff_lp(x.iter().map(|(_, c)| c), p),
        })
    }
}

/// `ℓ_p` norm of a coefficient list. Exact for `p ∈ {1, 2}`; otherwise the
/// absolute values are sorted first so equal multisets give equal doubles.
pub fn coeff_lp<'a>(coeffs: impl Iterator<Item = &'a Q>, p: &Q) -> NormValue {
    let cs: Vec<&Q> = coeffs.collect();
    if p.is_one() {
        let s: Q = cs.iter().map(|c| c.abs()).sum();
        return NormValue::Exact(&s * &s);
    }
    if *p == Q::from_integer(2.into()) {
        return NormValue::Exact(cs.iter().map(|c| *c * *c).sum());
    }
    let mut abs: Vec<f64> = cs.iter().map(|c| to_f64(&c.abs())).collect();
    abs.sort_by(|a, b| a.total_cmp(b));
    NormValue::Approx(lp(&abs, to_f64(p)))
}

/// A norm, stored squared when exact.
#[derive(Clone, Debug, PartialEq)]
pub enum NormValue {
    Exact(Q),
    Approx(f64),
}

impl NormValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(s) => to_f64(s).sqrt(),
            NormValue::Approx(v) => *v,
        }
    }

    pub fn squared(&self) -> Option<&Q> {
        match self {
            NormValue::Exact(s) => Some(s),
            NormValue::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NormValue::Exact(s) => s.is_zero(),
            NormValue::Approx(v) => *v == 0.0,
        }
    }

    pub fn cmp(&self, other: &NormValue) -> Ordering {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    /// `|‖a‖ − ‖b‖| < δ`, decided exactly for exact values:
    /// with `a ≥ b`, `√a < √b + δ ⇔ a − b − δ² < 2δ√b`.
    pub fn within(&self, other: &NormValue, delta: &Q) -> bool {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                let d = hi - lo - delta * delta;
                d.is_negative() || &d * &d < Q::from_integer(4.into()) * delta * delta * lo
            }
            _ => (self.to_f64() - other.to_f64()).abs() < to_f64(delta),
        }
    }

    pub fn display(&self) -> String {
        match self {
            NormValue::Exact(s) => fmt_rational(s),
            NormValue::Approx(v) => format!("{:.12}", v * v),
        }
    }
}

/// `num / den` as a norm ratio, exact (squared) when both are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Ratio {
    pub value: f64,
    pub squared: Option<Q>,
}

impl Ratio {
    pub fn of(num: &NormValue, den: &NormValue) -> Ratio {
        match (num, den) {
            (NormValue::Exact(a), NormValue::Exact(b)) => {
                let r = a / b;
                Ratio { value: to_f64(&r).sqrt(), squared: Some(r) }
            }
            _ => Ratio { value: num.to_f64() / den.to_f64(), squared: None },
        }
    }

    pub fn inverse(&self) -> Ratio {
        Ratio { value: 1.0 / self.value, squared: self.squared.as_ref().map(|r| r.recip()) }
    }

    pub fn gt(&self, other: &Ratio) -> bool {
        match (&self.squared, &other.squared) {
            (Some(a), Some(b)) => a > b,
            _ => self.value > other.value,
        }
    }

    pub fn max(self, other: Ratio) -> Ratio {
        if other.gt(&self) {
            other
        } else {
            self
        }
    }

    /// `ratio ≤ √a + b` for rationals `a ≥ 0`, `b ≥ 0`; exact when possible.
    pub fn at_most_sqrt_plus(&self, a: &Q, b: &Q) -> bool {
        match &self.squared {
            // r ≤ a + b² + 2b√a  ⇔  d ≤ 0 or d² ≤ 4ab²
            Some(r) => {
                let d = r - a - b * b;
                !d.is_positive() || &d * &d <= Q::from_integer(4.into()) * a * b * b
            }
            None => self.value <= to_f64(a).sqrt() + to_f64(b),
        }
    }
}
