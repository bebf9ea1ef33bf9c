use spectral_strip::StripError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EulerError {
    #[error(transparent)]
    Strip(#[from] StripError),
    #[error("{what} has nonzero x-mean {value:e}")]
    NonZeroMean { what: &'static str, value: f64 },
    #[error("Laplacian of u depends on x: oscillating part {defect:e}")]
    LaplacianNotShear { defect: f64 },
    #[error("outer term missing at level {level} (thirds of eps)")]
    HierarchyGap { level: i32 },
}

pub type Result<T> = std::result::Result<T, EulerError>;
