use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("tensor violates the symmetric zero-sum rules (max violation {violation:e})")]
    NotSymmetric { violation: f64 },

    #[error("no crossing of the best-response branches on [0, 1]")]
    NoCrossing,

    #[error("continuation value V = {v} is outside the range where the best-response formulas hold")]
    ValueNotSmall { v: f64 },

    #[error("recursive values increased at round {round}: {prev} -> {next}")]
    NonMonotone { round: usize, prev: f64, next: f64 },

    #[error("branch derivatives must have opposite signs (got {a:e} and {b:e})")]
    DerivativeSigns { a: f64, b: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
