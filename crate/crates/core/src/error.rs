use thiserror::Error;

pub type Result<T> = std::result::Result<T, MufError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MufError {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("dimension {dim} exceeds the configured limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector {index} is not unit norm (norm = {norm})")]
    NotUnit { index: usize, norm: f64 },

    #[error("vectors do not span the space (lower frame bound {lower})")]
    NotAFrame { lower: f64 },

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value outside its domain: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("infeasible parameters: probability entry {most_negative} is negative")]
    Infeasible { most_negative: f64 },

    #[error("state is not parameterizable: {0}")]
    NotParameterizable(String),

    #[error("analysis not applicable: {0}")]
    Inapplicable(String),

    #[error("construction failed: relation residual {residual}")]
    ConstructionFailure { residual: f64 },

    #[error("basis {0} is not orthonormal")]
    NotOrthonormal(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for MufError {
    fn from(e: std::io::Error) -> Self {
        MufError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for MufError {
    fn from(e: serde_json::Error) -> Self {
        MufError::Parse(e.to_string())
    }
}
