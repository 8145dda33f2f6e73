use thiserror::Error;

/// Errors raised by the numerical kernels, model construction and the
/// bound analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("iteration did not converge within {sweeps} sweeps (residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry in matrix or vector")]
    NonFinite,

    #[error("total Hilbert-space dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("operator term {term} is not Hermitian: {reason}")]
    NonHermitianTerm { term: usize, reason: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid splitting assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("brute-force oracle limited to qubit systems of dimension <= 64: {0}")]
    OracleScaleExceeded(String),

    #[error("bound undefined: {0}")]
    UndefinedBound(String),

    #[error("product-subspace enumeration needs {needed} members, cap is {cap}")]
    EnumerationCap { needed: usize, cap: usize },

    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("model is not bipartite: {0}")]
    NotBipartite(String),

    #[error("eigenvalue separation {0:.3e} is too small")]
    DegenerateSeparation(f64),

    #[error("matrix is not an orthogonal projector (defect {0:.3e})")]
    NotProjector(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
