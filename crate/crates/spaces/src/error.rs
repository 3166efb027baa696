use jsm_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("expected a vector over the {expected} scheme, got {got}")]
    Scheme { expected: &'static str, got: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("registry conflict: {0}")]
    Registry(String),
    #[error("registry io: {0}")]
    RegistryIo(String),
    #[error("weight index {0} exceeds the arithmetic budget")]
    Budget(String),
    #[error("invalid exponent {0}")]
    Exponent(String),
    #[error("n must be at least 1")]
    ZeroLength,
}
