use thiserror::Error;

/// Errors raised across the simulator, codec, learner and harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of a model function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Observation or action encoding failed (bad dimension, index out of range).
    #[error("codec error: {0}")]
    Codec(String),

    /// API misuse, e.g. stepping an episode that already terminated.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    /// A loss or gradient became NaN/inf during optimisation.
    #[error("non-finite value during training: {0}")]
    NonFinite(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Codec(_) => "codec",
            Error::Usage(_) => "usage",
            Error::Config(_) => "config",
            Error::Checkpoint(_) => "checkpoint",
            Error::NonFinite(_) => "non_finite",
            Error::Shape(_) => "shape",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
