use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompositeError {
    #[error(transparent)]
    Strip(#[from] spectral_strip::StripError),
    #[error(transparent)]
    Upper(#[from] prandtl_upper::UpperError),
    #[error(transparent)]
    Euler(#[from] euler_cascade::EulerError),
    #[error(transparent)]
    Lower(#[from] lower_layer::LowerError),
    #[error("{kind} term at level {level}: {source}")]
    Term {
        kind: &'static str,
        level: i32,
        #[source]
        source: Box<CompositeError>,
    },
    #[error("eps = {0} is outside (0, 1)")]
    InvalidEpsilon(f64),
    #[error("truncation order {0} is not in 0..=3")]
    InvalidOrder(u32),
    #[error("order {requested} exceeds the built hierarchy (order {built})")]
    OrderNotBuilt { requested: u32, built: u32 },
    #[error("{what}: stretched coordinate {s} lies outside the layer grid")]
    OutOfRange { what: &'static str, s: f64 },
    #[error("{what} has x-mean {value}")]
    NonZeroMean { what: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, CompositeError>;

impl CompositeError {
    pub(crate) fn at(kind: &'static str, level: i32) -> impl FnOnce(CompositeError) -> CompositeError {
        move |e| CompositeError::Term { kind, level, source: Box::new(e) }
    }
}
