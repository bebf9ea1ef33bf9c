//! Discretization core for steady flow on the periodic strip `T x [0,1]`.
//!
//! Fields are Fourier series in `x` with profiles sampled on a uniform grid in
//! `y` (or in a stretched boundary-layer coordinate). Derivatives in `y` are
//! second-order centered differences, quadrature is the trapezoid rule.

pub mod blocktri;
pub mod error;
pub mod fd;
pub mod field;
pub mod fourier;
pub mod grid;
pub mod hardy;
pub mod helmholtz;
pub mod interp;
pub mod power;
pub mod problem;
pub mod series;
pub mod stretched;

pub use error::StripError;
pub use field::{LayerField, ModalField, ModeProfile, Samples, StripField};
pub use grid::{Grid1D, GridKind};
pub use num_complex::Complex64;
pub use power::EpsPower;
pub use problem::{Forcing, ProblemSpec};
