use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("scale mismatch: M = {left} vs M = {right}")]
    ScaleMismatch { left: f64, right: f64 },

    /// A cell value outside the regime required by the operation.
    #[error("value {value} at cell ({x}, {y}) is outside {regime}")]
    Domain {
        x: usize,
        y: usize,
        value: f64,
        regime: &'static str,
    },

    #[error("singularity at cell ({x}, {y}): {what}")]
    Singularity {
        x: usize,
        y: usize,
        what: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("verification failed: {what} deviates by {deviation:e} (tolerance {tolerance:e})")]
    Verification {
        what: String,
        deviation: f64,
        tolerance: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
