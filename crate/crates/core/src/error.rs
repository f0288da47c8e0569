use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Dimension or shape contract violated by a caller.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A value that must be finite was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(String),
    /// Invalid argument outside shape issues (ranges, empty inputs, ...).
    #[error("invalid argument: {0}")]
    InvalidArg(String),
    /// Malformed or incompatible on-disk artifact.
    #[error("format error: {0}")]
    Format(String),
    /// A required upstream artifact is missing or unusable.
    #[error("artifact error: {0}")]
    Artifact(String),
    /// Training produced a non-finite loss or gradient and was halted.
    #[error("training diverged: {0}")]
    Divergence(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
