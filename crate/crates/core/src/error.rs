use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("invalid rational literal `{0}` (expected an integer or p/q)")]
    InvalidRational(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("momentum must be nonzero")]
    ZeroMomentum,
    #[error("momentum {0} is not a grid point")]
    OffGrid(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("context rejected: {0}")]
    InvalidContext(String),
    #[error("free-slot signature mismatch: {0} vs {1}")]
    Signature(usize, usize),
    #[error("letter kind not allowed here: {0}")]
    Domain(String),
    #[error("rewriting did not terminate within {0} steps")]
    NonTermination(usize),
}

pub type Result<T> = std::result::Result<T, CoreError>;
