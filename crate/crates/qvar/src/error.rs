use thiserror::Error;

/// Errors surfaced by instance handling, validation and the solvers.
#[derive(Debug, Error)]
pub enum QvarError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("undefined arithmetic: {0}")]
    Arithmetic(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("construction not applicable: {0}")]
    NotApplicable(String),
    #[error("unknown catalog entry: {0}")]
    UnknownCatalog(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QvarError>;
