//! Orchestration of the strip problem: configuration, expansion builds, NS
//! solves, eps sweeps with rate fits, and property-suite reports.
//!
//! Every command writes under one output directory. Manifests, tables and
//! reports are deterministic for a fixed config; only `sweep/timing.csv`
//! records wall-clock time.

pub mod config;
pub mod dump;
pub mod error;
pub mod expand;
pub mod output;
pub mod rate;
pub mod run;
pub mod solve;
pub mod sweep;
pub mod verify;

pub use config::{load_config, parse_config, RunConfig};
pub use dump::FieldDump;
pub use error::{CliError, Result};
pub use expand::{cmd_expand, CheckEntry, ExpandManifest};
pub use rate::{fit_rate, RateFit};
pub use solve::{cmd_solve, SolveManifest};
pub use sweep::{cmd_sweep, sweep_table, ConvergenceTable, SweepRow};
pub use verify::{cmd_verify, run_verify, Fault, Suite, VerifyReport};
