use jsm_core::CoreError;
use jsm_plegma::PlegmaError;
use jsm_spaces::SpaceError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsymError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Plegma(#[from] PlegmaError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("generator produced a vector over {got}, ambient space expects {expected}")]
    Ambient { expected: String, got: String },
    #[error("unknown ambient space {0}")]
    UnknownAmbient(String),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("generator has no vector ({i}, {n})")]
    OutOfRange { i: usize, n: u64 },
    #[error("table for k = {0} has no families")]
    EmptyTable(usize),
    #[error("coefficient row is identically zero")]
    ZeroRow,
    #[error("suppression needs at most 16 vectors, got {0}")]
    TooManyVectors(usize),
    #[error("hypothesis {condition} fails: {detail}")]
    Hypothesis { condition: &'static str, detail: String },
    #[error("depth budget {budget} too small, need {needed}")]
    Budget { budget: usize, needed: usize },
}
