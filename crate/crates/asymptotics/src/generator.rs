use jsm_core::{FinVec, Index, IndexScheme, Q};
use jsm_spaces::james::james_pair_vector;
use num_traits::One;

use crate::error::AsymError;
use crate::levelblock::LevelBlockFamily;
use crate::norm::Ambient;

/// `l` sequences of vectors in a common ambient space, indexed from 1.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceGenerator {
    /// Unit vectors of `ℓ_p`, sequence `i` taking every `l`-th coordinate.
    Lp { p: Q },
    /// Normalized `ℓ₁` blocks of `block` coordinates, disjoint across all
    /// sequences.
    L1Blocks { block: u64 },
    /// `e_{2n} + e_1` and `e_{2n+1} − e_1` in James space.
    JamesPair,
    LevelBlocks(LevelBlockFamily),
    VectorList { ambient: Ambient, sequences: Vec<Vec<FinVec>> },
}

impl SequenceGenerator {
    pub fn name(&self) -> String {
        match self {
            SequenceGenerator::Lp { p } => Ambient::Lp(p.clone()).name(),
            SequenceGenerator::L1Blocks { block } => format!("l1-blocks:{block}"),
            SequenceGenerator::JamesPair => "james-pair".into(),
            SequenceGenerator::LevelBlocks(f) => format!("jt-level-blocks:{}x{}", f.len(), f.l()),
            SequenceGenerator::VectorList { ambient, sequences } => format!("list:{}:{}", ambient.name(), sequences.len()),
        }
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            SequenceGenerator::Lp { p } => Ambient::Lp(p.clone()),
            SequenceGenerator::L1Blocks { .. } => Ambient::Lp(Q::one()),
            SequenceGenerator::JamesPair => Ambient::James,
            SequenceGenerator::LevelBlocks(_) => Ambient::Jt,
            SequenceGenerator::VectorList { ambient, .. } => ambient.clone(),
        }
    }

    pub fn normalized(&self) -> bool {
        !matches!(self, SequenceGenerator::JamesPair | SequenceGenerator::VectorList { .. })
    }

    /// Largest usable `l`, if bounded.
    pub fn max_l(&self) -> Option<usize> {
        match self {
            SequenceGenerator::JamesPair => Some(2),
            SequenceGenerator::LevelBlocks(f) => Some(f.l()),
            SequenceGenerator::VectorList { sequences, .. } => Some(sequences.len()),
            _ => None,
        }
    }

    /// Length of the sequences, if finite.
    pub fn len(&self) -> Option<u64> {
        match self {
            SequenceGenerator::LevelBlocks(f) => Some(f.len() as u64),
            SequenceGenerator::VectorList { sequences, .. } => sequences.iter().map(|s| s.len() as u64).min(),
            _ => None,
        }
    }

    /// The `n`-th vector of sequence `i` when `l` sequences are in use.
    pub fn vector(&self, i: usize, n: u64, l: usize) -> Result<FinVec, AsymError> {
        let out_of_range = AsymError::OutOfRange { i, n };
        if i == 0 || i > l || n == 0 || self.max_l().is_some_and(|m| l > m) {
            return Err(out_of_range);
        }
        let v = match self {
            SequenceGenerator::Lp { .. } => FinVec::unit(IndexScheme::Natural, Index::Nat((n - 1) * l as u64 + i as u64)),
            SequenceGenerator::L1Blocks { block } => {
                let start = ((n - 1) * l as u64 + i as u64 - 1) * block;
                let c = Q::new(1.into(), (*block as i64).into());
                FinVec::from_entries(IndexScheme::Natural, (1..=*block).map(|t| (Index::Nat(start + t), c.clone())))?
            }
            SequenceGenerator::JamesPair => james_pair_vector(i as u32, n),
            SequenceGenerator::LevelBlocks(f) => f.sets.get(n as usize - 1).and_then(|s| s.get(i - 1)).cloned().ok_or(out_of_range)?,
            SequenceGenerator::VectorList { sequences, .. } => {
                sequences.get(i - 1).and_then(|s| s.get(n as usize - 1)).cloned().ok_or(out_of_range)?
            }
        };
        let ambient = self.ambient();
        if v.scheme() != ambient.scheme() {
            return Err(AsymError::Ambient { expected: ambient.scheme().to_string(), got: v.scheme().to_string() });
        }
        Ok(v)
    }
}
