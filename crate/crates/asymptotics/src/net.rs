use jsm_core::random::seeded;
use jsm_core::Q;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Coefficient matrices `(a_{ij})` with entries in `[−1, 1]`; `rows[i][j]`.
pub type Matrix = Vec<Vec<Q>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffNet {
    pub l: usize,
    pub k: usize,
    pub matrices: Vec<Matrix>,
}

/// Sign patterns are exhaustive over `{−1, 0, 1}` up to this many matrices,
/// otherwise over `{−1, 1}` truncated to it.
pub const PATTERN_CAP: usize = 1024;

fn patterns(cells: usize, values: &[i64], cap: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let base = values.len() as u64;
    let total = base.checked_pow(cells as u32).unwrap_or(u64::MAX);
    for code in 0..total {
        if out.len() >= cap {
            break;
        }
        let mut c = code;
        let mut p = Vec::with_capacity(cells);
        for _ in 0..cells {
            p.push(values[(c % base) as usize]);
            c /= base;
        }
        if p.iter().any(|v| *v != 0) {
            out.push(p);
        }
    }
    out
}

fn shape(flat: &[Q], l: usize, k: usize) -> Matrix {
    (0..l).map(|i| flat[i * k..(i + 1) * k].to_vec()).collect()
}

impl CoeffNet {
    pub fn signs(l: usize, k: usize) -> CoeffNet {
        let cells = l * k;
        let with_zero = 3usize.checked_pow(cells as u32).is_some_and(|n| n - 1 <= PATTERN_CAP);
        let values: &[i64] = if with_zero { &[0, 1, -1] } else { &[1, -1] };
        let matrices = patterns(cells, values, PATTERN_CAP)
            .into_iter()
            .map(|p| shape(&p.into_iter().map(|v| Q::from_integer(v.into())).collect::<Vec<_>>(), l, k))
            .collect();
        CoeffNet { l, k, matrices }
    }

    /// Sign patterns followed by `random` seeded matrices with entries
    /// `a/d`, `|a| ≤ d ≤ 6`.
    pub fn standard(l: usize, k: usize, random: usize, seed: u64) -> CoeffNet {
        let mut net = CoeffNet::signs(l, k);
        let mut rng = seeded(seed);
        let target = net.matrices.len() + random;
        while net.matrices.len() < target {
            let flat: Vec<Q> = (0..l * k)
                .map(|_| {
                    let d: i64 = rng.random_range(1..=6);
                    Q::new(rng.random_range(-d..=d).into(), d.into())
                })
                .collect();
            if flat.iter().any(|c| !c.is_zero()) {
                net.matrices.push(shape(&flat, l, k));
            }
        }
        net
    }

    pub fn is_valid(&self) -> bool {
        self.matrices.iter().all(|m| {
            m.len() == self.l && m.iter().all(|r| r.len() == self.k && r.iter().all(|c| c.abs() <= Q::one()))
        })
    }

    /// Adds the matrices of `other` not already present.
    pub fn refine(&self, other: &CoeffNet) -> CoeffNet {
        let mut out = self.clone();
        for m in &other.matrices {
            if !out.matrices.contains(m) {
                out.matrices.push(m.clone());
            }
        }
        out
    }
}

/// `"a b;c d"`, rows separated by `;`.
pub fn format_matrix(m: &Matrix) -> String {
    m.iter()
        .map(|r| r.iter().map(jsm_core::num::fmt_rational).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(CoeffNet::signs(2, 2).matrices.len(), 80);
        assert_eq!(CoeffNet::signs(2, 3).matrices.len(), 728);
        assert_eq!(CoeffNet::signs(3, 3).matrices.len(), 512);
        let net = CoeffNet::standard(2, 2, 200, 5);
        assert_eq!(net.matrices.len(), 280);
        assert!(net.is_valid());
    }
}
