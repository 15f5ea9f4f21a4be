use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite matrix entry at position {0}")]
    NonFiniteEntry(usize),

    #[error("SVD did not converge within {0} sweeps")]
    SvdNoConvergence(usize),

    #[error("point is not in the image of the lifting (residual {residual:e})")]
    NotInImage { residual: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid is not compatible with the signed permutation group: {0}")]
    IncompatibleGrid(String),

    #[error("index {index} out of range for grid of {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid function value at node {index}: {reason}")]
    InvalidValue { index: usize, reason: &'static str },

    #[error("function is +inf at every node")]
    AllInfinite,

    #[error("function is not invariant under the signed permutation group (deviation {deviation:e} at node {index})")]
    NotInvariant { deviation: f64, index: usize },

    #[error("axis {axis} is not uniformly spaced")]
    NonUniformAxis { axis: usize },

    #[error("linear program exceeded {0} simplex iterations")]
    LpIterationCap(usize),

    #[error("no grid slope reaches the requested accuracy (best epsilon {best_epsilon:e})")]
    HyperplaneNotFound { best_epsilon: f64 },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid parameter for model `{model}`: {reason}")]
    InvalidParameter { model: String, reason: String },

    #[error("malformed document: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
