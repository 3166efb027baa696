//! A two-line space whose halves are unconditional but whose union is not.
//!
//! The norm is the supremum over a norming set `W` built from coordinate
//! functionals, weighted functionals `(1/m_j) Σ_{i∈E} ±e*_i` with
//! `#E = μ_j = m_j²`, and sums of consistent pairs of these along special
//! sequences, all closed under interval projections.

pub mod bounds;
pub mod functional;
pub mod mu;
pub mod registry;
pub mod special;

pub use bounds::{mr_norm_bounds, mr_norm_bounds_finvec, BoundMethod, MrBounds};
pub use functional::{MrFunctional, Projected, Weighted};
pub use mu::{MuCertificate, MuRule, MuSequence};
pub use registry::{LineSet, SigmaRegistry};
pub use special::{build_special_vectors, SpecialSequence, SpecialVectors};
