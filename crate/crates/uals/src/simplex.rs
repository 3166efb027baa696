//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! All variables are nonnegative. Problems here are tiny (tens of rows,
//! at most a few hundred columns) so reduced costs are recomputed from
//! scratch every pivot instead of being carried in the tableau.

use jsm_core::Q;
use num_traits::{Signed, Zero};

use crate::error::UalsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Q)>,
    pub rel: Relation,
    pub rhs: Q,
}

/// `minimize objective · x` subject to the rows, `x >= 0`.
#[derive(Clone, Debug)]
pub struct Lp {
    n: usize,
    objective: Vec<Q>,
    rows: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Q,
    pub x: Vec<Q>,
}

impl Lp {
    pub fn new(n: usize) -> Lp {
        Lp { n, objective: vec![Q::zero(); n], rows: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn add_var(&mut self) -> usize {
        self.objective.push(Q::zero());
        self.n += 1;
        self.n - 1
    }

    pub fn set_cost(&mut self, j: usize, c: Q) {
        self.objective[j] = c;
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Q)>, rel: Relation, rhs: Q) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.n));
        self.rows.push(Constraint { coeffs, rel, rhs });
    }

    pub fn minimize(&self) -> Result<LpSolution, UalsError> {
        let m = self.rows.len();
        let slacks: Vec<Option<usize>> = {
            let mut next = self.n;
            self.rows
                .iter()
                .map(|r| match r.rel {
                    Relation::Eq => None,
                    _ => {
                        next += 1;
                        Some(next - 1)
                    }
                })
                .collect()
        };
        let n_slack = slacks.iter().flatten().count();
        let art0 = self.n + n_slack;
        let cols = art0 + m;

        let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
        for (i, r) in self.rows.iter().enumerate() {
            let mut row = vec![Q::zero(); cols + 1];
            for (j, c) in &r.coeffs {
                row[*j] += c;
            }
            if let Some(s) = slacks[i] {
                row[s] = match r.rel {
                    Relation::Le => Q::from_integer(1.into()),
                    _ => Q::from_integer((-1).into()),
                };
            }
            row[cols] = r.rhs.clone();
            if row[cols].is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
            row[art0 + i] = Q::from_integer(1.into());
            t.push(row);
        }
        let mut basis: Vec<usize> = (art0..art0 + m).collect();

        let mut cost1 = vec![Q::zero(); cols];
        for c in cost1.iter_mut().skip(art0) {
            *c = Q::from_integer(1.into());
        }
        run(&mut t, &mut basis, &cost1, |_| true)?;
        let phase1: Q = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art0)
            .map(|(i, _)| t[i][cols].clone())
            .sum();
        if !phase1.is_zero() {
            return Err(UalsError::Infeasible);
        }

        // Pivot zero-level artificials out, dropping redundant rows.
        let mut i = 0;
        while i < t.len() {
            if basis[i] >= art0 {
                match (0..art0).find(|&j| !t[i][j].is_zero()) {
                    Some(j) => pivot(&mut t, &mut basis, i, j),
                    None => {
                        t.remove(i);
                        basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        let mut cost2 = vec![Q::zero(); cols];
        cost2[..self.n].clone_from_slice(&self.objective);
        run(&mut t, &mut basis, &cost2, |j| j < art0)?;

        let mut x = vec![Q::zero(); self.n];
        for (i, &b) in basis.iter().enumerate() {
            if b < self.n {
                x[b] = t[i][cols].clone();
            }
        }
        let value = x.iter().zip(&self.objective).map(|(a, c)| a * c).sum();
        Ok(LpSolution { value, x })
    }
}

fn pivot(t: &mut [Vec<Q>], basis: &mut [usize], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v = &*v / &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    basis[r] = c;
}

fn run<F: Fn(usize) -> bool>(t: &mut [Vec<Q>], basis: &mut [usize], cost: &[Q], allowed: F) -> Result<(), UalsError> {
    let cols = cost.len();
    loop {
        let entering = (0..cols).filter(|&j| allowed(j) && !basis.contains(&j)).find(|&j| {
            let mut d = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() && !t[i][j].is_zero() {
                    d -= &cost[b] * &t[i][j];
                }
            }
            d.is_negative()
        });
        let Some(j) = entering else { return Ok(()) };
        let mut best: Option<(usize, Q)> = None;
        for i in 0..t.len() {
            if !t[i][j].is_positive() {
                continue;
            }
            let ratio = &t[i][cols] / &t[i][j];
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        let Some((r, _)) = best else { return Err(UalsError::Unbounded) };
        pivot(t, basis, r, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jsm_core::{q, qi};

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let mut lp = Lp::new(2);
        lp.set_cost(0, qi(-3));
        lp.set_cost(1, qi(-5));
        lp.add(vec![(0, qi(1))], Relation::Le, qi(4));
        lp.add(vec![(1, qi(2))], Relation::Le, qi(12));
        lp.add(vec![(0, qi(3)), (1, qi(2))], Relation::Le, qi(18));
        let s = lp.minimize().unwrap();
        assert_eq!(s.value, qi(-36));
        assert_eq!(s.x, vec![qi(2), qi(6)]);
    }

    #[test]
    fn equality_and_ge_rows() {
        // min t with t >= 1 - a, t >= a, a + b = 1
        let mut lp = Lp::new(3);
        lp.set_cost(2, qi(1));
        lp.add(vec![(2, qi(1)), (0, qi(1))], Relation::Ge, qi(1));
        lp.add(vec![(2, qi(1)), (0, qi(-1))], Relation::Ge, qi(0));
        lp.add(vec![(0, qi(1)), (1, qi(1))], Relation::Eq, qi(1));
        let s = lp.minimize().unwrap();
        assert_eq!(s.value, q(1, 2));
        assert_eq!(s.x[0], q(1, 2));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::new(1);
        lp.add(vec![(0, qi(1))], Relation::Le, qi(-1));
        assert_eq!(lp.minimize(), Err(UalsError::Infeasible));
        let mut lp = Lp::new(1);
        lp.set_cost(0, qi(-1));
        assert_eq!(lp.minimize(), Err(UalsError::Unbounded));
    }

    #[test]
    fn degenerate_redundant_rows() {
        let mut lp = Lp::new(2);
        lp.set_cost(0, qi(1));
        lp.add(vec![(0, qi(1)), (1, qi(1))], Relation::Eq, qi(1));
        lp.add(vec![(0, qi(2)), (1, qi(2))], Relation::Eq, qi(2));
        lp.add(vec![(0, qi(1))], Relation::Ge, qi(0));
        let s = lp.minimize().unwrap();
        assert_eq!(s.value, qi(0));
        assert_eq!(s.x, vec![qi(0), qi(1)]);
    }
}
