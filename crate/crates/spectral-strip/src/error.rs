use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StripError {
    #[error("periodic grid needs an even sample count >= 4, got {0}")]
    BadSampleCount(usize),
    #[error("grid needs at least {min} intervals, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("invalid grid bound {0}")]
    BadBound(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),
    #[error("singular linear system in block {block}")]
    Singular { block: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, StripError>;
