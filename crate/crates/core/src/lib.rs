//! Index schemes, exact vectors and their JSON encoding.
//!
//! Every coefficient is a `BigRational`. Floating point never enters this
//! crate except in [`num::to_f64`], which exists for display only.

pub mod band;
pub mod error;
pub mod index;
pub mod io;
pub mod num;
pub mod random;
pub mod rle;
pub mod vec;

pub use band::Band;
pub use error::CoreError;
pub use index::{Index, IndexScheme, Line, Node, Part};
pub use num::{q, qi, Q};
pub use rle::{Positions, RleVec, Run};
pub use vec::FinVec;
