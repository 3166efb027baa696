use jsm_core::{FinVec, Index, IndexScheme};

use crate::family::{PlegmaError, PlegmaFamily};

/// Sends `e^i_j` to `e^i_{s_i(j)}`.
pub fn plegma_shift(x: &FinVec, s: &PlegmaFamily) -> Result<FinVec, PlegmaError> {
    let l = s.l();
    if x.scheme() != IndexScheme::Interleaved(l as u32) {
        return Err(PlegmaError::WrongScheme(l));
    }
    let mut out = FinVec::zero(x.scheme());
    for (idx, c) in x.iter() {
        let Index::Pair { n, i } = *idx else { return Err(PlegmaError::WrongScheme(l)) };
        if i as usize > l || n == 0 || n as usize > s.k() {
            return Err(PlegmaError::OutsideFamily { i: i as u64, j: n, l, k: s.k() });
        }
        out.set(Index::pair(i, s.get(i as usize, n as usize)), c.clone());
    }
    Ok(out)
}

/// Sorts `(i, n)` pairs by `n`, then `i`.
pub fn natural_order(pairs: &[(u32, u64)]) -> Vec<(u32, u64)> {
    let mut v = pairs.to_vec();
    v.sort_by_key(|&(i, n)| (n, i));
    v
}
