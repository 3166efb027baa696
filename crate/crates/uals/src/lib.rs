//! Finite experiments on uniform approximation by convex hulls of operators.
//!
//! [`pointwise_gap`] asks how well the hull approximates `A` at one vector,
//! [`minimax_gap`] how well a single hull point does on a set of witnesses
//! simultaneously. The [`cases`] module runs the four counterexamples end to
//! end and reports both directions.

pub mod cases;
mod descent;
pub mod error;
pub mod gap;
pub mod norm;
pub mod operator;
pub mod pigeonhole;
pub mod report;
pub mod simplex;

pub use cases::{verify_case, Case, CaseOptions};
pub use descent::{project_simplex, DescentResult};
pub use error::UalsError;
pub use gap::{
    minimax_descent, minimax_gap, minimax_gap_with, operator_gap, pointwise_gap, residual_gap, GapSolution, GapValue,
    SolverOptions, Weights,
};
pub use norm::{BlockNorm, Exponent};
pub use operator::{Action, ConvexCombination, OperatorModel, Sign, Space};
pub use pigeonhole::{coverage, half_subsets, pigeonhole_witness, SlotCoverage};
pub use report::{Check, GapReport, ProbeGap, SubspaceLower, SubspaceUpper};
pub use simplex::{Lp, LpSolution, Relation};
