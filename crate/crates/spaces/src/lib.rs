//! Norm oracles for the sequence spaces studied in this workspace.
//!
//! Squared norms are returned whenever the norm itself may be irrational.

pub mod brute;
pub mod calx;
pub mod error;
pub mod james;
pub mod jt;
pub mod mixed;
pub mod mr;

pub use error::SpaceError;
pub use james::{james_example_pair, james_norm_sq, james_pair_realize, JamesNorm};
pub use jt::{jt_norm_sq, JtNorm, Segment};
pub use calx::{calx_norm_sq, Surd};
pub use mixed::{mixed_pq_norm, MixedNorm};
