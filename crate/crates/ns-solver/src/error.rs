use spectral_strip::StripError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NsError {
    #[error(transparent)]
    Strip(#[from] StripError),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("{ny} y-intervals under-resolve eps = {eps}; at least {needed} are needed")]
    UnderResolved { ny: usize, eps: f64, needed: usize },
    #[error("field mismatch: {0}")]
    Mismatch(String),
    #[error("wall data must vanish, found {0:e}")]
    NonZeroWall(f64),
}

pub type Result<T> = std::result::Result<T, NsError>;
