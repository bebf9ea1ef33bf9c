//! Steady Navier-Stokes flow on the periodic strip `T x [0,1]` with viscosity
//! `eps^2`, `u = 0` on `y = 0`, `u = alpha + delta f(x)` on `y = 1` and `v = 0`
//! on both walls.
//!
//! Velocity lives on the y-nodes and pressure on the half nodes. The nonlinear
//! system is solved by damped Newton with a block-tridiagonal direct solve;
//! the linear Stokes problem also has a mode-by-mode solver.

mod discrete;
pub mod error;
pub mod manufactured;
mod newton;
mod norms;
mod state;
mod stokes;

pub use discrete::{NsProblem, Unknowns};
pub use error::{NsError, Result};
pub use newton::{required_ny, solve_problem, solve_steady_ns, InitialGuess, NsConfig, CELLS_PER_LAYER};
pub use norms::{
    error_norms, integral, l2, l2_joint, poisson_defect, sobolev_embedding_check, stokes_estimate, stream_vorticity,
    weighted_norms, ErrorReport, WeightedNorms, WEIGHT_KAPPAS,
};
pub use state::{half_to_nodes, nodes_to_half, resample, NSState, NewtonLog, QUADRATIC_WINDOW, ROUNDOFF_FLOOR};
pub use stokes::stokes_solve;
