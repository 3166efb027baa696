//! Structured elements of the norming set and their exact evaluation.

use jsm_core::rle::Positions;
use jsm_core::{Line, Q, RleVec};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::mu::MuSequence;
use super::registry::LineSet;
use crate::error::SpaceError;

/// `(1/m_j) Σ_{i∈E} ε_i e*_i` with `E` on one line, given as signed runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighted {
    pub weight: u64,
    pub line: Line,
    /// `(set, sign)`, sets in increasing position order.
    pub runs: Vec<(LineSet, i8)>,
}

impl Weighted {
    /// A constant-sign functional on one set.
    pub fn on(weight: u64, set: &LineSet, sign: i8) -> Weighted {
        Weighted { weight, line: set.line, runs: vec![(set.clone(), sign)] }
    }

    pub fn support_size(&self) -> BigUint {
        self.runs.iter().map(|(s, _)| s.len.clone()).sum()
    }

    /// Sign pattern as maximal `(sign, length)` blocks.
    fn pattern(&self) -> Vec<(i8, BigUint)> {
        let mut out: Vec<(i8, BigUint)> = Vec::new();
        for (s, e) in &self.runs {
            match out.last_mut() {
                Some((sign, len)) if *sign == *e => *len += &s.len,
                _ => out.push((*e, s.len.clone())),
            }
        }
        out
    }

    pub fn consistent_with(&self, other: &Weighted) -> bool {
        self.pattern() == other.pattern()
    }

    fn eval(&self, x: &RleVec, mu: &MuSequence, window: Option<&(BigUint, BigUint)>) -> Result<Q, SpaceError> {
        let mut acc = Q::zero();
        for (set, sign) in &self.runs {
            let (mut lo, mut hi) = (set.start.clone(), set.end());
            if let Some((a, b)) = window {
                let (wlo, whi) = line_window(self.line, a, b);
                lo = lo.max(wlo);
                hi = hi.min(whi);
            }
            if lo.is_zero() || lo > hi {
                continue;
            }
            let s = x.restrict_sum(&Positions::Interval { line: self.line, lo, hi })?;
            acc += if *sign < 0 { -s } else { s };
        }
        Ok(acc / Q::from_integer(BigInt::from(mu.m(self.weight)?)))
    }

    fn to_json(&self) -> Value {
        let runs: Vec<Value> = self
            .runs
            .iter()
            .map(|(s, e)| json!([s.start.to_string(), s.len.to_string(), e]))
            .collect();
        json!({ "weight": self.weight, "line": self.line.number(), "runs": runs })
    }
}

/// Positions of `line` whose naturals fall in `[a, b]`.
pub fn line_window(line: Line, a: &BigUint, b: &BigUint) -> (BigUint, BigUint) {
    let one = BigUint::one();
    match line {
        // 2p-1 ∈ [a,b]  ⇔  p ∈ [⌈(a+1)/2⌉, ⌊(b+1)/2⌋]
        Line::N1 => ((a + 2u32) / 2u32, (b + &one) / 2u32),
        // 2p ∈ [a,b]  ⇔  p ∈ [⌈a/2⌉, ⌊b/2⌋]
        Line::N2 => (a.div_ceil(&BigUint::from(2u32)), b / 2u32),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MrFunctional {
    W0 { natural: BigUint, sign: i8 },
    W1(Weighted),
    W2(Vec<(Weighted, Weighted)>),
}

/// `P_E(f)`: `f` restricted to an interval of naturals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projected {
    pub f: MrFunctional,
    pub interval: Option<(BigUint, BigUint)>,
}

impl From<MrFunctional> for Projected {
    fn from(f: MrFunctional) -> Projected {
        Projected { f, interval: None }
    }
}

impl MrFunctional {
    /// Checks the structural conditions that do not involve σ: exact
    /// weights and consistency of pairs.
    pub fn check(&self, mu: &MuSequence) -> Result<bool, SpaceError> {
        Ok(match self {
            MrFunctional::W0 { natural, sign } => !natural.is_zero() && sign.abs() == 1,
            MrFunctional::W1(w) => w.support_size() == mu.mu(w.weight)?,
            MrFunctional::W2(pairs) => {
                for (a, b) in pairs {
                    if a.line != Line::N1 || b.line != Line::N2 || !a.consistent_with(b) {
                        return Ok(false);
                    }
                    if a.support_size() != mu.mu(a.weight)? || a.weight != b.weight {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }
}

impl Projected {
    pub fn eval(&self, x: &RleVec, mu: &MuSequence) -> Result<Q, SpaceError> {
        let win = self.interval.as_ref();
        match &self.f {
            MrFunctional::W0 { natural, sign } => {
                if let Some((a, b)) = win {
                    if natural < a || natural > b {
                        return Ok(Q::zero());
                    }
                }
                let line = if natural.is_odd() { Line::N1 } else { Line::N2 };
                let pos = (natural + 1u32) / 2u32;
                let c = x.coeff_at(line, &pos);
                Ok(if *sign < 0 { -c } else { c })
            }
            MrFunctional::W1(w) => w.eval(x, mu, win),
            MrFunctional::W2(pairs) => {
                let mut acc = Q::zero();
                for (a, b) in pairs {
                    acc += a.eval(x, mu, win)? + b.eval(x, mu, win)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let f = match &self.f {
            MrFunctional::W0 { natural, sign } => json!({ "kind": "W0", "natural": natural.to_string(), "sign": sign }),
            MrFunctional::W1(w) => json!({ "kind": "W1", "part": w.to_json() }),
            MrFunctional::W2(pairs) => {
                let p: Vec<Value> = pairs.iter().map(|(a, b)| json!([a.to_json(), b.to_json()])).collect();
                json!({ "kind": "W2", "pairs": p })
            }
        };
        match &self.interval {
            None => f,
            Some((a, b)) => json!({ "functional": f, "interval": [a.to_string(), b.to_string()] }),
        }
    }
}
