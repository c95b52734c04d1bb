use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("inclusion not applicable: {0}")]
    Inapplicable(String),
    #[error("inconsistent exponents: {0}")]
    Inconsistent(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
