use thiserror::Error;

/// Errors produced by the angulab library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation left the supported numeric range.
    #[error("range error: {0}")]
    Range(String),

    /// A state could not be constructed from the given data.
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("observable {observable} is not applicable to the {family} family")]
    NotApplicable { observable: String, family: String },

    #[error("observable {0} is not Hermitian; its mean is undefined")]
    NonHermitian(String),

    /// A non-finite number showed up where a finite one is required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
