use spectral_strip::StripError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UpperError {
    #[error(transparent)]
    Strip(#[from] StripError),
    #[error("Newton iteration stalled after {iterations} steps (residual history {history:?})")]
    NotConverged { iterations: usize, history: Vec<f64> },
    #[error("stream coordinate map is not monotone at x-node {node}")]
    NonMonotone { node: usize },
    #[error("{what} does not decay: far-field magnitude {tail:e}")]
    NotDecaying { what: &'static str, tail: f64 },
    #[error("no far-field plateau: spread {spread:e} exceeds {tol:e}")]
    NoPlateau { spread: f64, tol: f64 },
    #[error("hierarchy term missing at level {level} (thirds of eps)")]
    HierarchyGap { level: i32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, UpperError>;
