use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input to {0}")]
    NonFinite(&'static str),
    /// The Wei configuration is singular on the line charge.
    #[error("field evaluated at r = {r}; the line-charge configuration requires r > 0")]
    LineChargeSingularity { r: f64 },
    #[error("unsupported field configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("invalid loop path: {0}")]
    InvalidPath(String),
    #[error("invalid time leg: {0}")]
    InvalidTimeLeg(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
