use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("f_slb = {f_slb} is not a strict lower bound on f* = {f_star}")]
    NotStrictLowerBound { f_slb: f64, f_star: f64 },

    #[error("missing certificate: {0}")]
    MissingCertificate(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The first-order oracle returned the zero vector, so the current point
    /// is optimal and no step can be taken.
    #[error("zero subgradient at the current point")]
    ZeroSubgradient,

    #[error("run did not reach the requested tolerance within its budget")]
    BudgetExhausted,

    #[error("incompatible configuration: {0}")]
    Incompatible(String),

    #[error("invalid sampler: {0}")]
    InvalidSampler(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
