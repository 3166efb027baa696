//! Plegma families over finite ground sets.
//!
//! A family is `l` rows `s_1..s_l`, each a strictly increasing `k`-tuple,
//! such that every entry in column `j` is below every entry in column `j+1`
//! and the rows are ordered inside each column (strictly, for strict
//! families).

pub mod brute;
mod family;
mod ramsey;
mod shift;

pub use family::{count, enumerate, parse_rows, validate, PlegmaError, PlegmaFamily, PlegmaIter, Violation};
pub use ramsey::{builtin_coloring, ramsey_search, Coloring, ColoringFn, RamseyOutcome};
pub use shift::{natural_order, plegma_shift};
