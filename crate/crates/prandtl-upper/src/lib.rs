//! Upper boundary layer at the moving wall `y = 1`, in the stretched variable
//! `zeta = (y - 1) / eps <= 0`.
//!
//! The leading order is nonlinear and is solved through the von Mises
//! transformation; higher orders are linear problems about the leading profile.

pub mod batchelor;
pub mod error;
pub mod forcing;
pub mod homogenizer;
pub mod layer;
pub mod leading;
pub mod linear;
pub mod order;
pub mod von_mises;

pub use batchelor::{batchelor_constant, BatchelorConstants};
pub use error::UpperError;
pub use forcing::{upper_forcing, UpperForcing, UPPER_STRETCH};
pub use homogenizer::{Homogenizer, LiftSide};
pub use layer::{continuity_defect, extract_far_constant, upper_pressure, v_from_continuity, UpperLayer};
pub use leading::{leading_layer, LeadingLayer};
pub use linear::{FarCondition, LinearCoefficients};
pub use order::solve_upper_linear_bl;
pub use von_mises::{invert_von_mises, solve_von_mises, VonMisesConfig, VonMisesSolution};
