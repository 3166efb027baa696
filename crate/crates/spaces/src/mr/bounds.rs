//! Certified lower and upper bounds for the norm `sup{f(x) : f ∈ W}`.

use jsm_core::rle::Positions;
use jsm_core::{FinVec, Line, Q, RleVec};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::functional::{MrFunctional, Projected, Weighted};
use super::mu::MuSequence;
use super::registry::{LineSet, SigmaRegistry};
use super::special::SpecialSequence;
use crate::error::SpaceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    /// Every functional that can reach the support was enumerated.
    Exact,
    /// The vector is a signed block vector on a registered special
    /// sequence; the upper bound follows the weight-matching argument.
    Aligned,
    /// Per-run mass bound.
    Generic,
}

impl BoundMethod {
    pub fn name(self) -> &'static str {
        match self {
            BoundMethod::Exact => "exact",
            BoundMethod::Aligned => "aligned",
            BoundMethod::Generic => "generic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrBounds {
    pub lower: Q,
    pub upper: Q,
    pub witness: Projected,
    pub method: BoundMethod,
}

impl MrBounds {
    pub fn to_json(&self) -> Value {
        json!({
            "lower": jsm_core::num::fmt_rational(&self.lower),
            "upper": jsm_core::num::fmt_rational(&self.upper),
            "method": self.method.name(),
            "witness": self.witness.to_json(),
        })
    }
}

fn qb(b: &BigUint) -> Q {
    Q::from_integer(BigInt::from(b.clone()))
}

fn sign_of(c: &Q) -> i8 {
    if c.is_negative() {
        -1
    } else {
        1
    }
}

fn natural(line: Line, pos: &BigUint) -> BigUint {
    match line {
        Line::N1 => pos * 2u32 - 1u32,
        Line::N2 => pos * 2u32,
    }
}

struct Best {
    value: Q,
    witness: Projected,
}

impl Best {
    fn offer(&mut self, value: Q, witness: impl FnOnce() -> Projected) {
        if value > self.value {
            self.value = value;
            self.witness = witness();
        }
    }
}

/// A weight-`j` functional on `line` hitting the `μ_j` largest entries of
/// `x` with matching signs, padded past the end of the line.
fn top_functional(x: &RleVec, line: Line, j: u64, size: &BigUint) -> Weighted {
    let mut runs: Vec<_> = x.line_runs(line).collect();
    runs.sort_by(|a, b| b.coeff.abs().cmp(&a.coeff.abs()).then(a.start.cmp(&b.start)));
    let mut left = size.clone();
    let mut picked: Vec<(LineSet, i8)> = Vec::new();
    for r in runs {
        if left.is_zero() {
            break;
        }
        let take = if r.len < left { r.len.clone() } else { left.clone() };
        left -= &take;
        picked.push((LineSet { line, start: r.start.clone(), len: take }, sign_of(&r.coeff)));
    }
    if !left.is_zero() {
        picked.push((LineSet { line, start: x.line_extent(line) + 1u32, len: left }, 1));
    }
    picked.sort_by(|a, b| a.0.start.cmp(&b.0.start));
    Weighted { weight: j, line, runs: picked }
}

/// `sup` over weighted functionals of weight `j` on `line`, projections
/// included: the top-`μ_j` absolute mass divided by `m_j`.
fn weighted_sup(x: &RleVec, mu: &MuSequence, line: Line, j: u64) -> Result<Q, SpaceError> {
    Ok(x.top_abs_sum(line, &mu.mu(j)?) / qb(&mu.m(j)?))
}

fn lower_candidates(x: &RleVec, mu: &MuSequence, reg: &SigmaRegistry) -> Result<Best, SpaceError> {
    let mut best = Best { value: Q::zero(), witness: MrFunctional::W0 { natural: BigUint::one(), sign: 1 }.into() };
    for r in x.runs() {
        best.offer(r.coeff.abs(), || {
            MrFunctional::W0 { natural: natural(r.line, &r.start), sign: sign_of(&r.coeff) }.into()
        });
    }
    for line in [Line::N1, Line::N2] {
        let extent = x.line_runs(line).map(|r| r.len.clone()).sum::<BigUint>();
        if extent.is_zero() {
            continue;
        }
        let last = mu.first_at_least(&extent)?;
        for j in 1..=last {
            let v = weighted_sup(x, mu, line, j)?;
            if v > best.value {
                let size = mu.mu(j)?;
                best.offer(v, || MrFunctional::W1(top_functional(x, line, j, &size)).into());
            }
        }
    }
    for key in reg.keys() {
        let Some(seq) = SpecialSequence::from_key(key, mu, reg) else { continue };
        let mut total = Q::zero();
        let mut pairs = Vec::new();
        for ((a, b), &j) in seq.pairs.iter().zip(&seq.weights) {
            let s = x.restrict_sum(&Positions::Interval { line: a.line, lo: a.start.clone(), hi: a.end() })?
                + x.restrict_sum(&Positions::Interval { line: b.line, lo: b.start.clone(), hi: b.end() })?;
            let sign = sign_of(&s);
            total += s.abs() / qb(&mu.m(j)?);
            pairs.push((Weighted::on(j, a, sign), Weighted::on(j, b, sign)));
        }
        best.offer(total, || MrFunctional::W2(pairs).into());
    }
    Ok(best)
}

/// Exact value when no special-sequence functional can put more than its
/// first pair and a slice of its second first-line set on the support.
///
/// With `μ_1 = 1` a first pair of weight 1 is two single coordinates
/// `a < b`; the second pair has weight `σ({a},{b}) ≥ 2`, so its first set
/// has more elements than there are odd naturals in the window and its
/// partner lies beyond the support. Every other functional acts as a
/// weighted functional on one line.
fn exact_small(x: &RleVec, mu: &MuSequence, reg: &mut SigmaRegistry, best: &mut Best) -> Result<bool, SpaceError> {
    let p1 = x.line_extent(Line::N1);
    let p2 = x.line_extent(Line::N2);
    let odd_count = p1.clone().max(p2.clone());
    let mu1 = mu.mu(1)?;
    if !mu1.is_one() {
        return Ok(odd_count < mu1);
    }
    if odd_count >= mu.mu(2)? {
        return Ok(false);
    }
    let (Some(p1), Some(p2)) = (p1.to_u64(), p2.to_u64()) else { return Ok(false) };
    for q in 1..=p1.max(p2) {
        let xb = x.coeff_at(Line::N2, &q.into());
        let tail_lo = BigUint::from(q + 1);
        let tail = if q < p1 {
            x.restrict_abs_sum(&Positions::Interval { line: Line::N1, lo: tail_lo.clone(), hi: p1.into() })?
        } else {
            Q::zero()
        };
        for p in 1..=q {
            let xa = x.coeff_at(Line::N1, &p.into());
            let e1 = LineSet::new(Line::N1, p, 1u32);
            let e2 = LineSet::new(Line::N2, q, 1u32);
            let t = reg.sigma(&[e1.clone(), e2.clone()])?;
            let t = t.to_u64().ok_or_else(|| SpaceError::Budget(t.to_string()))?;
            let m = qb(&mu.m(t)?);
            let both = (&xa + &xb).abs();
            let head = both.clone().max(xb.abs());
            let value = &head + &tail / &m;
            if value <= best.value {
                continue;
            }
            let sign = if both >= xb.abs() { sign_of(&(&xa + &xb)) } else { sign_of(&xb) };
            let mut pairs = vec![(Weighted::on(1, &e1, sign), Weighted::on(1, &e2, sign))];
            if !tail.is_zero() {
                let size = mu.mu(t)?;
                let tail_runs: Vec<_> = x
                    .line_runs(Line::N1)
                    .filter(|r| r.end() >= tail_lo)
                    .map(|r| {
                        let start = r.start.clone().max(tail_lo.clone());
                        let len = r.end() + 1u32 - &start;
                        (LineSet { line: Line::N1, start, len }, sign_of(&r.coeff))
                    })
                    .collect();
                let used: BigUint = tail_runs.iter().map(|(s, _)| s.len.clone()).sum();
                let mut f1 = Weighted { weight: t, line: Line::N1, runs: tail_runs };
                f1.runs.push((LineSet { line: Line::N1, start: BigUint::from(p1 + 1), len: &size - used }, 1));
                let mut at = f1.runs.last().map(|(s, _)| s.end()).unwrap_or_default();
                let mut f2 = Weighted { weight: t, line: Line::N2, runs: Vec::new() };
                for (s, e) in &f1.runs {
                    f2.runs.push((LineSet { line: Line::N2, start: at.clone(), len: s.len.clone() }, *e));
                    at += &s.len;
                }
                pairs.push((f1, f2));
            }
            let interval = (both < xb.abs()).then(|| (natural(Line::N2, &q.into()), natural(Line::N1, &BigUint::from(p1 + 1))));
            best.value = value;
            best.witness = Projected { f: MrFunctional::W2(pairs), interval };
        }
    }
    Ok(true)
}

/// Matches `x` against a registered special sequence: one run per set, each
/// with coefficient `±1/m_{j_k}`.
fn aligned_sequence(x: &RleVec, mu: &MuSequence, reg: &SigmaRegistry) -> Result<Option<(SpecialSequence, Vec<(Q, Q)>)>, SpaceError> {
    let runs = x.runs();
    if runs.is_empty() || runs.len() % 2 != 0 {
        return Ok(None);
    }
    let n = runs.len() / 2;
    'keys: for key in reg.keys() {
        let Some(seq) = SpecialSequence::from_key(key, mu, reg) else { continue };
        if seq.len() != n || seq.weights[0] != 1 {
            continue;
        }
        let mut coeffs = Vec::with_capacity(n);
        for (k, (a, b)) in seq.pairs.iter().enumerate() {
            let inv = Q::new(BigInt::one(), mu.m(seq.weights[k])?.into());
            let mut cs = [Q::zero(), Q::zero()];
            for (slot, set) in [a, b].into_iter().enumerate() {
                // Runs are sorted by line then start: line 1 sets first.
                let r = &runs[if set.line == Line::N1 { k } else { n + k }];
                if r.line != set.line || r.start != set.start || r.len != set.len || r.coeff.abs() != inv {
                    continue 'keys;
                }
                cs[slot] = r.coeff.clone();
            }
            let [c1, c2] = cs;
            coeffs.push((c1, c2));
        }
        return Ok(Some((seq, coeffs)));
    }
    Ok(None)
}

fn aligned_upper(x: &RleVec, mu: &MuSequence, seq: &SpecialSequence, coeffs: &[(Q, Q)]) -> Result<Q, SpaceError> {
    let n = seq.len();
    let w = &seq.weights;
    let pair_sup = |j: u64| -> Result<Q, SpaceError> {
        Ok(weighted_sup(x, mu, Line::N1, j)? + weighted_sup(x, mu, Line::N2, j)?)
    };
    // Weights not in w contribute at most c_y on each line.
    let mut c_y = Q::zero();
    for (a, &wa) in w.iter().enumerate() {
        c_y += mu.cross_total(wa)?;
        for &wb in &w[a + 1..] {
            c_y -= mu.cross(wa, wb)? * Q::from_integer(2.into());
        }
    }
    let two_c = &c_y * Q::from_integer(2.into());
    let mut s = Vec::with_capacity(n);
    let mut extra = Vec::with_capacity(n);
    for (k, (c1, c2)) in coeffs.iter().enumerate() {
        let sk = (c1 + c2).abs() * qb(&mu.m(w[k])?);
        let cut = if *c1 == -c2.clone() { Q::one() } else { Q::from_integer(2.into()) };
        extra.push(if cut > sk { &cut - &sk } else { Q::zero() });
        s.push(sk);
    }
    // First differing weight at position 1: one pair may still share a
    // weight with some block of x.
    let mut best_pair = Q::zero();
    for &j in w {
        best_pair = best_pair.max(pair_sup(j)?);
    }
    let mut upper = Q::from_integer(2.into()).max(&best_pair + &two_c);
    for first_diff in 2..=n + 1 {
        let same: Q = s[..first_diff - 2].iter().cloned().sum();
        let mut ex: Vec<Q> = extra[..first_diff - 2].to_vec();
        ex.sort();
        let cut: Q = ex.iter().rev().take(2).cloned().sum();
        let b = same + cut + pair_sup(w[first_diff - 2])? + &two_c;
        upper = upper.max(b);
    }
    Ok(upper)
}

/// Largest coefficient mass a single norming functional can put on a run
/// of `len` positions: distinct weights, each on at most `μ_t` positions.
fn run_mass(mu: &MuSequence, len: &BigUint) -> Result<Q, SpaceError> {
    let mut left = len.clone();
    let mut acc = Q::zero();
    let mut t = 1;
    while !left.is_zero() {
        let size = mu.mu(t)?;
        let take = if size < left { size } else { left.clone() };
        left -= &take;
        acc += qb(&take) / qb(&mu.m(t)?);
        t += 1;
    }
    Ok(acc)
}

pub fn mr_norm_bounds(x: &RleVec, mu: &MuSequence, reg: &mut SigmaRegistry) -> Result<MrBounds, SpaceError> {
    let mut best = lower_candidates(x, mu, reg)?;
    let w0_w1 = best.value.clone();
    if exact_small(x, mu, reg, &mut best)? {
        return Ok(MrBounds { lower: best.value.clone(), upper: best.value, witness: best.witness, method: BoundMethod::Exact });
    }
    if let Some((seq, coeffs)) = aligned_sequence(x, mu, reg)? {
        let upper = aligned_upper(x, mu, &seq, &coeffs)?.max(w0_w1).max(best.value.clone());
        return Ok(MrBounds { lower: best.value, upper, witness: best.witness, method: BoundMethod::Aligned });
    }
    let mut generic = Q::zero();
    for r in x.runs() {
        generic += r.coeff.abs() * run_mass(mu, &r.len)?;
    }
    let upper = generic.max(best.value.clone());
    Ok(MrBounds { lower: best.value, upper, witness: best.witness, method: BoundMethod::Generic })
}

pub fn mr_norm_bounds_finvec(x: &FinVec, mu: &MuSequence, reg: &mut SigmaRegistry) -> Result<MrBounds, SpaceError> {
    mr_norm_bounds(&RleVec::from_finvec(x)?, mu, reg)
}
