use thiserror::Error;

/// Errors raised by the numerical engine and the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad parameters or inputs outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A solver could not certify its answer at the requested tolerance.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A mathematical invariant that must hold was violated.
    #[error("verification failure in {statement}: {detail}")]
    Verification {
        statement: String,
        detail: String,
        /// Offending sample, serialized for replay.
        sample: Option<serde_json::Value>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
