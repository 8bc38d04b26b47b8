//! Error type shared across the crate.

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value is outside the domain of the operation
    /// (rank bounds, malformed weighting strings, roots not in the table, …).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The operation is not defined for the given root system
    /// (e.g. closed-form verdicts for exceptional families).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Two routes that must agree produced different answers.  This is a
    /// genuine mathematical discrepancy, never a usage error.
    #[error("oracle mismatch: {0}")]
    Mismatch(String),

    /// A checkpoint file exists but does not match the requested run.
    #[error("checkpoint mismatch: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }
}
