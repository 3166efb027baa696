//! Greedy stabilization of norm tables over gated strict plegma families.
//!
//! For `k ≤ k_max` a family `s` in `[L]^k` is gated when `s_1(1)` is at
//! least the `k`-th element of `L`. Elements of the ground set are tried in
//! order and kept only if every new gated family keeps every table row
//! within its tolerance.

use std::collections::HashMap;
use std::fmt::Write as _;

use jsm_core::{FinVec, Q};
use jsm_plegma::{enumerate, PlegmaFamily};
use num_traits::{One, Zero};

use crate::error::AsymError;
use crate::generator::SequenceGenerator;
use crate::net::{format_matrix, CoeffNet, Matrix};
use crate::norm::{coeff_lp, NormValue, Ratio};
use crate::schedule::StabilizationSchedule;

#[derive(Clone, Debug, PartialEq)]
pub struct Extreme {
    pub norm: NormValue,
    pub family: PlegmaFamily,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub coeffs: Matrix,
    /// Norm at the first gated family.
    pub representative: NormValue,
    pub min: Extreme,
    pub max: Extreme,
}

impl TableRow {
    pub fn is_constant(&self) -> bool {
        self.min.norm == self.max.norm
    }

    pub fn oscillation(&self) -> f64 {
        if self.is_constant() {
            0.0
        } else {
            self.max.norm.to_f64() - self.min.norm.to_f64()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KTable {
    pub k: usize,
    pub delta: Q,
    pub families: u64,
    pub representative: Option<PlegmaFamily>,
    pub rows: Vec<TableRow>,
}

impl KTable {
    pub fn oscillation(&self) -> f64 {
        self.rows.iter().map(TableRow::oscillation).fold(0.0, f64::max)
    }

    /// Every row takes one exact value over all gated families.
    pub fn exactly_constant(&self) -> bool {
        self.families > 0 && self.rows.iter().all(|r| r.is_constant() && r.min.norm.squared().is_some())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rejection {
    pub element: u64,
    pub k: usize,
    pub coeffs: Matrix,
    pub families: (PlegmaFamily, PlegmaFamily),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Stable,
    /// Thinning left no gated family for this `k`.
    NoGatedFamilies { k: usize },
    BudgetExhausted { evaluations: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JsmEstimate {
    pub generator: String,
    pub l: usize,
    pub k_max: usize,
    pub thinned: Vec<u64>,
    pub tables: Vec<KTable>,
    pub rejections: Vec<Rejection>,
    pub outcome: Outcome,
    pub evaluations: u64,
}

/// One net per `k`: sign patterns plus `random` seeded matrices.
pub fn standard_nets(l: usize, k_max: usize, random: usize, seed: u64) -> Vec<CoeffNet> {
    (1..=k_max).map(|k| CoeffNet::standard(l, k, random, seed + k as u64)).collect()
}

struct Evaluator<'a> {
    generator: &'a SequenceGenerator,
    l: usize,
    cache: HashMap<(usize, u64), FinVec>,
    evaluations: u64,
    budget: u64,
}

impl Evaluator<'_> {
    fn norm(&mut self, s: &PlegmaFamily, a: &Matrix) -> Result<Option<NormValue>, AsymError> {
        if self.evaluations >= self.budget {
            return Ok(None);
        }
        self.evaluations += 1;
        let ambient = self.generator.ambient();
        let mut sum = FinVec::zero(ambient.scheme());
        for (i, row) in a.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let n = s.get(i + 1, j + 1);
                if !self.cache.contains_key(&(i + 1, n)) {
                    let v = self.generator.vector(i + 1, n, self.l)?;
                    self.cache.insert((i + 1, n), v);
                }
                sum = sum.lin_comb(&Q::one(), &self.cache[&(i + 1, n)], c)?;
            }
        }
        Ok(Some(ambient.norm(&sum)?))
    }
}

pub const DEFAULT_BUDGET: u64 = 5_000_000;

pub fn jsm_estimate(
    generator: &SequenceGenerator,
    l: usize,
    k_max: usize,
    nets: &[CoeffNet],
    schedule: &StabilizationSchedule,
    ground: &[u64],
    budget: u64,
) -> Result<JsmEstimate, AsymError> {
    if schedule.len() < k_max {
        return Err(AsymError::Schedule(format!("{} tolerances for k_max = {k_max}", schedule.len())));
    }
    if nets.len() < k_max || nets.iter().take(k_max).enumerate().any(|(k, n)| n.l != l || n.k != k + 1 || !n.is_valid()) {
        return Err(AsymError::Schedule("one valid l×k net per k is required".into()));
    }
    let mut ground = ground.to_vec();
    ground.sort_unstable();
    ground.dedup();
    let mut ev = Evaluator { generator, l, cache: HashMap::new(), evaluations: 0, budget };
    let mut tables: Vec<KTable> = (1..=k_max)
        .map(|k| KTable { k, delta: schedule.delta(k).cloned().unwrap_or_default(), families: 0, representative: None, rows: Vec::new() })
        .collect();
    let mut thinned: Vec<u64> = Vec::new();
    let mut rejections = Vec::new();
    let mut exhausted = false;
    'ground: for &m in &ground {
        let mut cand = thinned.clone();
        cand.push(m);
        let mut staged: Vec<(usize, Vec<TableRow>, u64, Option<PlegmaFamily>)> = Vec::new();
        for (t, table) in tables.iter().enumerate() {
            let k = t + 1;
            if cand.len() < k {
                continue;
            }
            let fresh: Vec<PlegmaFamily> = enumerate(&cand[k - 1..], l, k, true).filter(|s| s.get(l, k) == m).collect();
            if fresh.is_empty() {
                continue;
            }
            let mut rows = table.rows.clone();
            let rep = table.representative.clone().or_else(|| fresh.first().cloned());
            for s in &fresh {
                for (r, a) in nets[t].matrices.iter().enumerate() {
                    let Some(v) = ev.norm(s, a)? else {
                        exhausted = true;
                        break 'ground;
                    };
                    if rows.len() <= r {
                        let e = Extreme { norm: v.clone(), family: s.clone() };
                        rows.push(TableRow { coeffs: a.clone(), representative: v, min: e.clone(), max: e });
                        continue;
                    }
                    let row = &mut rows[r];
                    if v.cmp(&row.min.norm).is_lt() {
                        row.min = Extreme { norm: v, family: s.clone() };
                    } else if v.cmp(&row.max.norm).is_gt() {
                        row.max = Extreme { norm: v, family: s.clone() };
                    } else {
                        continue;
                    }
                    if !row.max.norm.within(&row.min.norm, &table.delta) {
                        rejections.push(Rejection {
                            element: m,
                            k,
                            coeffs: a.clone(),
                            families: (row.min.family.clone(), row.max.family.clone()),
                        });
                        continue 'ground;
                    }
                }
            }
            staged.push((t, rows, fresh.len() as u64, rep));
        }
        for (t, rows, added, rep) in staged {
            tables[t].rows = rows;
            tables[t].families += added;
            tables[t].representative = rep;
        }
        thinned.push(m);
    }
    let outcome = if exhausted {
        Outcome::BudgetExhausted { evaluations: ev.evaluations }
    } else if let Some(t) = tables.iter().find(|t| t.families == 0) {
        Outcome::NoGatedFamilies { k: t.k }
    } else {
        Outcome::Stable
    };
    Ok(JsmEstimate { generator: generator.name(), l, k_max, thinned, tables, rejections, outcome, evaluations: ev.evaluations })
}

impl JsmEstimate {
    pub fn table(&self, k: usize) -> Option<&KTable> {
        self.tables.get(k.checked_sub(1)?)
    }

    /// One row per coefficient matrix: representative squared norm,
    /// oscillation, then the equivalence ratio to each `ℓ_p`.
    pub fn to_csv(&self, k: usize, ps: &[Q]) -> Result<String, AsymError> {
        let table = self.table(k).filter(|t| t.families > 0).ok_or(AsymError::EmptyTable(k))?;
        let mut out = String::from("coeffs,norm_sq,oscillation");
        for p in ps {
            let _ = write!(out, ",ratio_l{}", jsm_core::num::fmt_rational(p));
        }
        out.push('\n');
        for row in &table.rows {
            let _ = write!(out, "{},{},{:.12}", format_matrix(&row.coeffs), row.representative.display(), row.oscillation());
            for p in ps {
                let r = row_ratio(row, p)?;
                let _ = write!(out, ",{:.12}", r.value);
            }
            out.push('\n');
        }
        Ok(out)
    }
}

fn row_ratio(row: &TableRow, p: &Q) -> Result<Ratio, AsymError> {
    let reference = coeff_lp(row.coeffs.iter().flatten(), p);
    if row.representative.is_zero() || reference.is_zero() {
        return Err(AsymError::ZeroRow);
    }
    let r = Ratio::of(&reference, &row.representative);
    Ok(r.clone().max(r.inverse()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub ratio: Ratio,
    pub coeffs: Matrix,
}

/// `max` over the table of `max(‖a‖_p / N(a), N(a) / ‖a‖_p)`.
pub fn equivalence_constant(est: &JsmEstimate, k: usize, p: &Q) -> Result<Equivalence, AsymError> {
    let table = est.table(k).filter(|t| t.families > 0 && !t.rows.is_empty()).ok_or(AsymError::EmptyTable(k))?;
    let mut best: Option<Equivalence> = None;
    for row in &table.rows {
        let r = row_ratio(row, p)?;
        if best.as_ref().is_none_or(|b| r.gt(&b.ratio)) {
            best = Some(Equivalence { ratio: r, coeffs: row.coeffs.clone() });
        }
    }
    best.ok_or(AsymError::EmptyTable(k))
}

pub fn format_ratio(r: &Ratio) -> String {
    match &r.squared {
        Some(s) => format!("sqrt({}) ~ {:.12}", jsm_core::num::fmt_rational(s), r.value),
        None => format!("{:.12}", r.value),
    }
}
