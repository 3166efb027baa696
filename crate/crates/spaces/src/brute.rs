//! Exhaustive reference evaluators for tiny inputs. They share no code with
//! the fast oracles and exist to cross-check them.

use std::collections::{BTreeMap, HashMap};

use jsm_core::{FinVec, Index, Line, Node, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::SpaceError;
use crate::mr::{LineSet, MuSequence, SigmaRegistry};

fn naturals(x: &FinVec) -> Vec<(u64, Q)> {
    let mut v: Vec<(u64, Q)> = x
        .iter()
        .map(|(i, c)| match i {
            Index::Nat(n) => (*n, c.clone()),
            other => panic!("natural index expected, got {other}"),
        })
        .collect();
    v.sort_by_key(|p| p.0);
    v
}

/// Squared James norm by labelling every support point as skipped, opening
/// a new interval, or extending the current one. Runs on integer
/// numerators over a common denominator; `None` if they overflow `i128`.
pub fn james_brute_sq(x: &FinVec) -> Option<Q> {
    let pts = naturals(x);
    let den = pts.iter().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
    let nums: Vec<i128> = pts
        .iter()
        .map(|(_, c)| (c.numer() * (&den / c.denom())).to_i128())
        .collect::<Option<_>>()?;
    if nums.iter().any(|n| n.unsigned_abs() > (1u128 << 50)) {
        return None;
    }
    fn go(nums: &[i128], open: Option<i128>, acc: i128, best: &mut i128) {
        let close = |acc: i128, open: Option<i128>| acc + open.map_or(0, |s| s * s);
        let Some((&a, rest)) = nums.split_first() else {
            *best = (*best).max(close(acc, open));
            return;
        };
        go(rest, None, close(acc, open), best);
        go(rest, Some(a), close(acc, open), best);
        if let Some(s) = open {
            go(rest, Some(s + a), acc, best);
        }
    }
    let mut best = 0i128;
    go(&nums, None, 0, &mut best);
    Some(Q::new(BigInt::from(best), &den * &den))
}

/// Squared JT norm by searching every segment of the full tree down to the
/// deepest support level: `free(v)` is the best value inside the subtree of
/// `v` when no segment enters from above.
pub fn jt_full_tree_sq(x: &FinVec) -> Q {
    let coeff: HashMap<Node, Q> = x
        .iter()
        .map(|(i, c)| match i {
            Index::Node(s) => (s.clone(), c.clone()),
            other => panic!("dyadic index expected, got {other}"),
        })
        .collect();
    let depth = coeff.keys().map(Node::level).max().unwrap_or(0);
    struct Tree {
        coeff: HashMap<Node, Q>,
        depth: usize,
        memo: HashMap<Node, Q>,
    }
    impl Tree {
        fn x(&self, v: &Node) -> Q {
            self.coeff.get(v).cloned().unwrap_or_else(Q::zero)
        }
        fn free(&mut self, v: &Node) -> Q {
            if v.level() > self.depth {
                return Q::zero();
            }
            if let Some(q) = self.memo.get(v) {
                return q.clone();
            }
            let skip = self.free(&v.child(0)) + self.free(&v.child(1));
            let start = self.through(v, Q::zero());
            let best = skip.max(start);
            self.memo.insert(v.clone(), best.clone());
            best
        }
        // A segment carrying `carried` from above continues into `v`.
        fn through(&mut self, v: &Node, carried: Q) -> Q {
            let c = carried + self.x(v);
            let (a, b) = (v.child(0), v.child(1));
            let mut best = &c * &c + self.free(&a) + self.free(&b);
            if v.level() < self.depth {
                let down_a = self.through(&a, c.clone()) + self.free(&b);
                let down_b = self.through(&b, c) + self.free(&a);
                best = best.max(down_a).max(down_b);
            }
            best
        }
    }
    let mut t = Tree { coeff, depth, memo: HashMap::new() };
    t.free(&Node::root())
}

/// True norm of a vector on the naturals `1..=N` by enumerating explicit
/// norming functionals restricted to the window together with every
/// interval projection. Needs fewer odd naturals in the window than `μ_2`
/// (and than `μ_1` unless `μ_1 = 1`), so that all but the first two sets of
/// a special sequence fall outside it.
pub fn mr_brute(x: &FinVec, mu: &MuSequence, reg: &mut SigmaRegistry) -> Result<Q, SpaceError> {
    let cells: BTreeMap<u64, Q> = naturals(x).into_iter().collect();
    let n = cells.keys().next_back().copied().unwrap_or(1);
    let odds: Vec<u64> = (1..=n).filter(|v| v % 2 == 1).collect();
    let evens: Vec<u64> = (1..=n).filter(|v| v % 2 == 0).collect();
    let mu1 = mu.mu(1)?.to_u64().unwrap_or(u64::MAX);
    let mu2 = mu.mu(2)?.to_u64().unwrap_or(u64::MAX);
    assert!((odds.len() as u64) < mu2 && (mu1 == 1 || (odds.len() as u64) < mu1), "window too large");

    // Every functional is a coefficient map on the window.
    let mut funcs: Vec<BTreeMap<u64, Q>> = Vec::new();
    let signings = |pos: &[u64], cap: u64, c: &Q| -> Vec<BTreeMap<u64, Q>> {
        let mut out = vec![BTreeMap::new()];
        for &p in pos {
            let mut next = Vec::new();
            for f in out {
                if (f.len() as u64) < cap {
                    for s in [c.clone(), -c.clone()] {
                        let mut g = f.clone();
                        g.insert(p, s);
                        next.push(g);
                    }
                }
                next.push(f);
            }
            out = next;
        }
        out
    };
    for i in 1..=n {
        funcs.push(BTreeMap::from([(i, Q::one())]));
        funcs.push(BTreeMap::from([(i, -Q::one())]));
    }
    for line in [&odds, &evens] {
        let mut j = 1;
        loop {
            let size = mu.mu(j)?.to_u64().unwrap_or(u64::MAX);
            let c = Q::new(BigInt::one(), mu.m(j)?.into());
            funcs.extend(signings(line, size, &c));
            if size >= line.len() as u64 {
                break;
            }
            j += 1;
        }
    }
    if mu1 == 1 {
        for (pa, &a) in odds.iter().enumerate() {
            for (pb, &b) in evens.iter().enumerate().filter(|(_, b)| **b > a) {
                let t = reg.sigma(&[LineSet::new(Line::N1, pa as u64 + 1, 1u32), LineSet::new(Line::N2, pb as u64 + 1, 1u32)])?;
                let t = t.to_u64().ok_or_else(|| SpaceError::Budget(t.to_string()))?;
                let c = Q::new(BigInt::one(), mu.m(t)?.into());
                let later: Vec<u64> = odds.iter().copied().filter(|o| *o > b).collect();
                for tail in signings(&later, u64::MAX, &c) {
                    for s in [Q::one(), -Q::one()] {
                        let mut f = tail.clone();
                        f.insert(a, s.clone());
                        f.insert(b, s);
                        funcs.push(f);
                    }
                }
            }
        }
    }
    let mut best = Q::zero();
    for f in &funcs {
        for lo in 1..=n {
            let mut acc = Q::zero();
            for hi in lo..=n {
                if let (Some(fc), Some(xc)) = (f.get(&hi), cells.get(&hi)) {
                    acc += fc * xc;
                }
                if acc > best {
                    best = acc.clone();
                }
            }
        }
    }
    Ok(best)
}
