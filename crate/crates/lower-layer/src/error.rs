use spectral_strip::StripError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LowerError {
    #[error(transparent)]
    Strip(#[from] StripError),
    #[error("{what} does not decay: weighted tail {tail:e}")]
    NotDecaying { what: &'static str, tail: f64 },
    #[error("wall trace of v-hat has nonzero x-mean {0:e}")]
    NonZeroMean(f64),
    #[error("hierarchy term missing at level {level} (thirds of eps)")]
    HierarchyGap { level: i32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, LowerError>;
