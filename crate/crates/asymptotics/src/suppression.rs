use jsm_core::{FinVec, Q};
use num_traits::{One, Zero};

use crate::error::AsymError;
use crate::norm::{Ambient, Ratio};

pub const MAX_VECTORS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct Suppression {
    pub ratio: Ratio,
    /// Indices kept by the worst projection.
    pub subset: Vec<usize>,
    pub coeffs: Vec<Q>,
}

/// `max ‖Σ_{i∈F} a_i v_i‖ / ‖Σ_i a_i v_i‖` over nonempty proper subsets `F`
/// and coefficient rows `a`; a lower bound for the suppression constant.
pub fn suppression_constant(vectors: &[FinVec], ambient: &Ambient, net: &[Vec<Q>]) -> Result<Suppression, AsymError> {
    let n = vectors.len();
    if n > MAX_VECTORS {
        return Err(AsymError::TooManyVectors(n));
    }
    let mut best = Suppression { ratio: Ratio { value: 1.0, squared: Some(Q::one()) }, subset: (0..n).collect(), coeffs: Vec::new() };
    for a in net {
        if a.len() != n || a.iter().all(Zero::is_zero) {
            return Err(AsymError::ZeroRow);
        }
        let combine = |mask: u32| -> Result<FinVec, AsymError> {
            let mut s = FinVec::zero(ambient.scheme());
            for (i, (v, c)) in vectors.iter().zip(a).enumerate() {
                if mask >> i & 1 == 1 && !c.is_zero() {
                    s = s.lin_comb(&Q::one(), v, c)?;
                }
            }
            Ok(s)
        };
        let full = ambient.norm(&combine((1 << n) - 1)?)?;
        if full.is_zero() {
            continue;
        }
        for mask in 1..(1u32 << n) - 1 {
            let part = ambient.norm(&combine(mask)?)?;
            let r = Ratio::of(&part, &full);
            if r.gt(&best.ratio) {
                best = Suppression { ratio: r, subset: (0..n).filter(|i| mask >> i & 1 == 1).collect(), coeffs: a.clone() };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jsm_core::{qi, Index, IndexScheme};

    #[test]
    fn orthonormal_vectors() {
        let vs: Vec<FinVec> = (1..=3).map(|n| FinVec::unit(IndexScheme::Natural, Index::Nat(n))).collect();
        let net = vec![vec![qi(1), qi(-1), qi(1)], vec![qi(1), qi(2), qi(0)]];
        let s = suppression_constant(&vs, &Ambient::Lp(qi(2)), &net).unwrap();
        assert_eq!(s.ratio.squared, Some(qi(1)));
        assert!(suppression_constant(&vs, &Ambient::Lp(qi(2)), &[vec![qi(0); 3]]).is_err());
    }
}
