use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A sign scan could not classify the grid (everything within tolerance of zero).
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    /// Two supposedly equivalent computation paths disagree. Signals a kernel bug,
    /// not a property of the inputs.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
