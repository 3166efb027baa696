//! James tree: `‖x‖² = sup Σ_i (S_i^*(x))²` over pairwise disjoint segments.

use std::collections::HashMap;

use jsm_core::{FinVec, Index, IndexScheme, Node, Q};
use num_traits::Zero;

use crate::error::SpaceError;

/// The chain of nodes from `top` down to `bottom`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub top: Node,
    pub bottom: Node,
}

impl Segment {
    pub fn new(top: Node, bottom: Node) -> Option<Segment> {
        top.precedes(&bottom).then_some(Segment { top, bottom })
    }

    pub fn contains(&self, s: &Node) -> bool {
        self.top.precedes(s) && s.precedes(&self.bottom)
    }

    pub fn nodes(&self) -> Vec<Node> {
        self.top.path_to(&self.bottom)
    }

    pub fn len(&self) -> usize {
        self.bottom.level() - self.top.level() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn disjoint(&self, other: &Segment) -> bool {
        !(self.contains(&other.top) || self.contains(&other.bottom) || other.contains(&self.top))
    }

    /// `S^*(x)`, the sum of the coefficients along the segment.
    pub fn eval(&self, x: &FinVec) -> Q {
        x.iter()
            .filter_map(|(i, c)| match i {
                Index::Node(s) if self.contains(s) => Some(c.clone()),
                _ => None,
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JtNorm {
    pub value: Q,
    pub segments: Vec<Segment>,
}

pub(crate) fn dyadic_support(x: &FinVec) -> Result<Vec<(Node, Q)>, SpaceError> {
    if x.scheme() != IndexScheme::Dyadic {
        return Err(SpaceError::Scheme { expected: "dyadic", got: x.scheme().to_string() });
    }
    Ok(x.iter()
        .map(|(i, c)| match i {
            Index::Node(s) => (s.clone(), c.clone()),
            _ => unreachable!("validated dyadic index"),
        })
        .collect())
}

/// Exact squared JT norm.
///
/// Any segment can be shrunk to the minimal one spanned by the support
/// nodes it meets without changing its value, and two such segments
/// intersect only if they share a support node. So the problem becomes a
/// choice of vertex-disjoint vertical paths in the forest obtained by
/// linking each support node to its nearest support ancestor, which a
/// bottom-up DP solves exactly. `open[v]` lists, for each possible bottom
/// `d` under `v`, the path sum from `v` to `d` and the best value of
/// everything hanging off that path.
pub fn jt_norm_sq(x: &FinVec) -> Result<JtNorm, SpaceError> {
    let pts = dyadic_support(x)?;
    let n = pts.len();
    // Lexicographic order on binary strings is preorder, so parents come first.
    let pos: HashMap<&Node, usize> = pts.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();
    let mut parent = vec![None; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (s, _)) in pts.iter().enumerate() {
        for lvl in (0..s.level()).rev() {
            if let Some(&p) = pos.get(&s.prefix(lvl)) {
                parent[i] = Some(p);
                children[p].push(i);
                break;
            }
        }
    }
    let mut closed = vec![Q::zero(); n];
    let mut choice: Vec<Option<usize>> = vec![None; n];
    let mut open: Vec<Vec<(Q, Q, usize)>> = vec![Vec::new(); n];
    for v in (0..n).rev() {
        let base: Q = children[v].iter().map(|&c| closed[c].clone()).sum();
        let xv = &pts[v].1;
        let mut list = vec![(xv.clone(), base.clone(), v)];
        for &c in &children[v] {
            let off = &base - &closed[c];
            for (s, r, d) in std::mem::take(&mut open[c]) {
                list.push((xv + s, r + &off, d));
            }
        }
        let mut best = base;
        for (s, r, d) in &list {
            let cand = s * s + r;
            if cand > best {
                best = cand;
                choice[v] = Some(*d);
            }
        }
        closed[v] = best;
        open[v] = list;
    }
    let mut segments = Vec::new();
    let mut stack: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    while let Some(v) = stack.pop() {
        match choice[v] {
            None => stack.extend(&children[v]),
            Some(d) => {
                segments.push(Segment { top: pts[v].0.clone(), bottom: pts[d].0.clone() });
                let (mut u, mut below) = (d, None);
                loop {
                    stack.extend(children[u].iter().filter(|&&c| Some(c) != below));
                    if u == v {
                        break;
                    }
                    below = Some(u);
                    u = parent[u].expect("path stays below its top");
                }
            }
        }
    }
    segments.sort();
    let value = (0..n).filter(|&i| parent[i].is_none()).map(|i| closed[i].clone()).sum();
    Ok(JtNorm { value, segments })
}

pub fn segments_value(x: &FinVec, segs: &[Segment]) -> Q {
    segs.iter().map(|s| {
        let v = s.eval(x);
        &v * &v
    })
    .sum()
}
