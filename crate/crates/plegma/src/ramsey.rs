//! Exhaustive search for a ground subset on which a coloring of strict
//! plegma families is constant.

use crate::family::{enumerate, PlegmaError, PlegmaFamily};

pub trait Coloring {
    fn color(&self, f: &PlegmaFamily) -> String;
}

/// Wraps a closure as a coloring.
pub struct ColoringFn<F>(pub F);

impl<F: Fn(&PlegmaFamily) -> String> Coloring for ColoringFn<F> {
    fn color(&self, f: &PlegmaFamily) -> String {
        (self.0)(f)
    }
}

/// Named colorings usable from the command line:
/// `constant`, `parity` (of the sum of all entries), `gt10` (largest entry
/// above 10), `first-mod3` (s_1(1) mod 3).
pub fn builtin_coloring(name: &str) -> Option<Box<dyn Coloring>> {
    let total = |f: &PlegmaFamily| f.rows().iter().flatten().sum::<u64>();
    Some(match name {
        "constant" => Box::new(ColoringFn(|_: &PlegmaFamily| "c".to_string())),
        "parity" => Box::new(ColoringFn(move |f: &PlegmaFamily| {
            if total(f) % 2 == 0 { "even" } else { "odd" }.to_string()
        })),
        "gt10" => Box::new(ColoringFn(|f: &PlegmaFamily| {
            let max = f.rows().iter().flatten().max().copied().unwrap_or(0);
            (max > 10).to_string()
        })),
        "first-mod3" => Box::new(ColoringFn(|f: &PlegmaFamily| (f.get(1, 1) % 3).to_string())),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RamseyOutcome {
    Found { set: Vec<u64>, color: String },
    /// Every subset of the requested size was examined.
    NotFound { subsets: u64 },
    /// The node budget ran out before the search finished.
    BudgetExhausted { subsets: u64 },
}

/// Scans `target_len`-subsets of `ground` in colex order. A node is one
/// coloring evaluation.
pub fn ramsey_search(
    coloring: &dyn Coloring,
    ground: &[u64],
    l: usize,
    k: usize,
    target_len: usize,
    budget: u64,
) -> Result<RamseyOutcome, PlegmaError> {
    if target_len < l * k {
        return Err(PlegmaError::TargetTooShort { target: target_len, need: l * k });
    }
    let mut g = ground.to_vec();
    g.sort_unstable();
    g.dedup();
    let n = g.len();
    if target_len > n {
        return Ok(RamseyOutcome::NotFound { subsets: 0 });
    }
    let mut comb: Vec<usize> = (0..target_len).collect();
    let mut nodes = 0u64;
    let mut subsets = 0u64;
    loop {
        let set: Vec<u64> = comb.iter().map(|&c| g[c]).collect();
        subsets += 1;
        let mut color: Option<String> = None;
        let mut mono = true;
        for fam in enumerate(&set, l, k, true) {
            if nodes >= budget {
                return Ok(RamseyOutcome::BudgetExhausted { subsets });
            }
            nodes += 1;
            let c = coloring.color(&fam);
            match &color {
                None => color = Some(c),
                Some(prev) if *prev != c => {
                    mono = false;
                    break;
                }
                _ => {}
            }
        }
        if mono {
            if let Some(color) = color {
                return Ok(RamseyOutcome::Found { set, color });
            }
        }
        // Next subset in colex order.
        let mut i = 0;
        while i < target_len {
            let limit = if i + 1 < target_len { comb[i + 1] } else { n };
            if comb[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == target_len {
            return Ok(RamseyOutcome::NotFound { subsets });
        }
        comb[i] += 1;
        for (t, c) in comb.iter_mut().enumerate().take(i) {
            *c = t;
        }
    }
}
