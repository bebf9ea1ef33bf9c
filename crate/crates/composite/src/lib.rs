//! Matched expansion assembled into one approximate solution on the strip.
//!
//! [`build_hierarchy`] solves the outer and layer terms in dependency order;
//! [`assemble_composite`] glues them with the cutoff, [`apply_corrector`] restores
//! incompressibility and [`residual`] measures what is left of the momentum balance.

pub mod assemble;
pub mod cutoff;
pub mod error;
pub mod hierarchy;

pub use assemble::{
    apply_corrector, approx_diagnostics, assemble_composite, composite, corrector_exponent, corrector_h,
    divergence_field, l2_norm, leading_prediction, mismatch_k, represented_levels, residual, wall_defect, ApproxDiagnostics,
    CompositeSolution, Jet, ResidualNorms,
};
pub use cutoff::Cutoff;
pub use error::{CompositeError, Result};
pub use hierarchy::{build_hierarchy, levels_up_to, max_level, Check, Hierarchy, HierarchyConfig, TermKind, TermReport};
