//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape or dimension mismatch between operands.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative kernel exhausted its iteration budget.
    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: String, iterations: usize },

    /// A linear system that the operation requires to be regular is singular.
    #[error("singular system: {0}")]
    Singular(String),

    /// A numeric failure mid-computation (NaN field value, step underflow, ...).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The requested evaluation mode is not available for this system.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// Malformed or inconsistent experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
