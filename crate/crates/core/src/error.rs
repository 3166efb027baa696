use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("malformed index {index} for scheme {scheme}")]
    MalformedIndex { index: String, scheme: String },
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("duplicate index {0}")]
    DuplicateIndex(String),
    #[error("scheme mismatch: {0} vs {1}")]
    SchemeMismatch(String, String),
    #[error("malformed document: {0}")]
    Document(String),
    #[error("positions straddle both lines")]
    StraddlesLines,
    #[error("runs overlap on line {0}")]
    OverlappingRuns(u8),
    #[error("vector too large to expand ({0} coordinates)")]
    TooLarge(String),
}
