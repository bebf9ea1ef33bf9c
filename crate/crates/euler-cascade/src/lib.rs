//! Outer (inviscid) expansion on the strip. Each level is a linearization about
//! Couette flow `u = A y` driven by normal-velocity data on both walls and by
//! products of lower levels.

pub mod error;
pub mod forcing;
pub mod harmonic;
pub mod term;

pub use error::{EulerError, Result};
pub use forcing::{check_shear_selection, euler_forcing, EulerForcing};
pub use harmonic::{divergence, harmonic_data, HarmonicData, harmonic_pair, laplacian_max, solve_harmonic_dirichlet, u_from_v};
pub use term::{momentum_residual, phi_profile, pressure_from_field, solve_euler_level, EulerTerm, OUTER_LEVELS};
