use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("rate fit needs at least 3 finite positive points, got {0}")]
    TooFewPoints(usize),
    #[error("bad field dump: {0}")]
    Dump(String),
    #[error("expansion failed: {0}")]
    Expansion(#[from] composite::CompositeError),
    #[error("solver failed at eps = {eps}: {source}")]
    Solver { eps: f64, source: ns_solver::NsError },
    #[error(transparent)]
    Ns(#[from] ns_solver::NsError),
    #[error(transparent)]
    Strip(#[from] spectral_strip::StripError),
    #[error(transparent)]
    Upper(#[from] prandtl_upper::UpperError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
