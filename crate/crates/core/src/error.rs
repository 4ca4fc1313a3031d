use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (residual {residual:e} > {tolerance:e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("operator is not positive semidefinite (eigenvalue {eigenvalue:e} below -{tolerance:e})")]
    NotPositiveSemidefinite { eigenvalue: f64, tolerance: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (residual {residual:e} > {tolerance:e})")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("unsupported dimension d={d}: {reason}")]
    UnsupportedDimension { d: usize, reason: String },

    #[error("requested {requested} members but the family has {available}")]
    CountOutOfRange { requested: usize, available: usize },

    #[error("state is not maximally entangled: partial transpose spectrum deviates from ±1/{d} by {deviation:e}")]
    NotMaximallyEntangled { d: usize, deviation: f64 },

    #[error("certificate parameters (lambda={lambda}, mu={mu}) violate the feasibility inequalities")]
    InvalidParameters { lambda: f64, mu: f64 },

    #[error("eigenspace decomposition mismatch: {0}")]
    DecompositionMismatch(String),

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
