use jsm_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UalsError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("empty witness set")]
    NoWitnesses,
    #[error("empty hull")]
    EmptyHull,
    #[error("malformed selector: {0}")]
    Selector(String),
    #[error("weights must be nonnegative and sum to 1: {0}")]
    Weights(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("parameters exceed the budget: {0}")]
    Budget(String),
    #[error("invalid exponent {0}")]
    Exponent(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
}
