//! One NS solve per eps, started from the composite, dispatched to a worker pool.

use std::time::Instant;

use composite::{composite, leading_prediction, CompositeSolution, Cutoff, Hierarchy, ResidualNorms};
use ns_solver::{error_norms, solve_steady_ns, ErrorReport, InitialGuess, NSState};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// Immutable job handed to a worker.
#[derive(Debug, Clone, Copy)]
pub struct EpsJob<'a> {
    pub cfg: &'a RunConfig,
    pub hierarchy: &'a Hierarchy,
    pub eps: f64,
}

#[derive(Debug, Clone)]
pub struct OrderOutcome {
    pub order: u32,
    pub composite: CompositeSolution,
    pub residual: ResidualNorms,
    /// `||u - u^a||_inf` against the NS state.
    pub u_error_inf: f64,
    pub v_error_inf: f64,
}

#[derive(Debug, Clone)]
pub struct EpsOutcome {
    pub eps: f64,
    pub state: NSState,
    /// Errors against `A y + u_p^(0)` and the top-order composite.
    pub errors: ErrorReport,
    /// Composites of orders `0..=m`.
    pub orders: Vec<OrderOutcome>,
    pub seconds: f64,
}

pub fn run_eps(job: EpsJob) -> Result<EpsOutcome> {
    let t0 = Instant::now();
    let (cfg, h, eps) = (job.cfg, job.hierarchy, job.eps);
    let cutoff = Cutoff::default();
    let top = cfg.expansion.order;
    let mut built = Vec::new();
    for m in 0..=top {
        built.push((m, composite(h, eps, &cutoff, m)?));
    }
    let (_, (guess, _)) = built.last().expect("order 0 always built");
    let state = solve_steady_ns(
        &cfg.spec(),
        eps,
        InitialGuess::Fields { u: &guess.u.f, v: &guess.v.f, p: Some(&guess.p) },
        &cfg.ns(),
    )
    .map_err(|source| CliError::Solver { eps, source })?;
    let lead = leading_prediction(h, eps, state.grid())?;
    let errors = error_norms(&state, &lead, Some((&guess.u.f, &guess.v.f))).map_err(|source| CliError::Solver { eps, source })?;
    let mut orders = Vec::new();
    for (m, (c, r)) in built {
        let e = error_norms(&state, &lead, Some((&c.u.f, &c.v.f))).map_err(|source| CliError::Solver { eps, source })?;
        orders.push(OrderOutcome {
            order: m,
            u_error_inf: e.u_composite_inf.unwrap_or(f64::NAN),
            v_error_inf: e.v_composite_inf.unwrap_or(f64::NAN),
            composite: c,
            residual: r,
        });
    }
    Ok(EpsOutcome { eps, state, errors, orders, seconds: t0.elapsed().as_secs_f64() })
}

/// Runs every eps of the config on `jobs` workers; results come back in config order.
pub fn run_all(cfg: &RunConfig, h: &Hierarchy, jobs: usize) -> Result<Vec<(f64, Result<EpsOutcome>)>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| CliError::Pool(e.to_string()))?;
    let list: Vec<EpsJob> = cfg.expansion.epsilons.iter().map(|&eps| EpsJob { cfg, hierarchy: h, eps }).collect();
    Ok(pool.install(|| list.par_iter().map(|&j| (j.eps, run_eps(j))).collect()))
}
