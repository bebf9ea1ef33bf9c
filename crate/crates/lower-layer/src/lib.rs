//! Lower boundary layer at the resting wall `y = 0`, in the stretched variable
//! `eta = y / eps^(2/3) >= 0`. Every order is linear about the Couette shear.

pub mod error;
pub mod forcing;
pub mod layer;
pub mod mode;

pub use error::{LowerError, Result};
pub use forcing::{lower_forcing, LowerForcing, LOWER_STRETCH};
pub use layer::{
    apply_lower, decaying_pressure, homogenize_lower, lower_pressure, lower_residual, solve_lower_linear_bl,
    v_hat_from_continuity, wall_pressure, LowerLayer,
};
pub use mode::{nonzero_mode_solve, zero_mode_solve};
