//! `vvlab solve`: NS states for every configured eps.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::dump::FieldDump;
use crate::error::Result;
use crate::expand::{build, CheckEntry};
use crate::output::{ensure_dir, write_json};
use crate::run::{run_all, EpsOutcome};

pub const DIVERGENCE_TOL: f64 = 1e-10;
pub const WALL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveEntry {
    pub eps: f64,
    /// Solver error message when the solve could not run at all.
    pub error: Option<String>,
    pub iterations: usize,
    pub residuals: Vec<f64>,
    pub damping: Vec<f64>,
    pub warnings: Vec<String>,
    pub checks: Vec<CheckEntry>,
    pub passed: bool,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveManifest {
    pub config_hash: String,
    pub order: u32,
    pub nx: usize,
    pub ny: usize,
    pub runs: Vec<SolveEntry>,
    pub passed: bool,
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Convergence, quadratic tail, divergence, wall and gauge checks of one state.
pub fn state_checks(cfg: &RunConfig, o: &EpsOutcome) -> Result<Vec<CheckEntry>> {
    let s = &o.state;
    let last = s.ny();
    let wall = cfg.spec().wall_samples(cfg.grid.nx);
    let top = s.u.trace(last).iter().zip(&wall).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let rest = s.u.trace(0).iter().chain(&s.v.trace(0)).chain(&s.v.trace(last)).fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(vec![
        CheckEntry::new("converged", flag(s.converged()), 0.0),
        CheckEntry::new("final_residual", s.log.final_residual(), cfg.solver.newton_tol),
        CheckEntry::new("quadratic_tail", flag(s.log.quadratic_tail()), 0.0),
        CheckEntry::new("divergence", s.divergence()?.max_abs(), DIVERGENCE_TOL),
        CheckEntry::new("wall", top.max(rest), WALL_TOL),
        CheckEntry::new("pressure_pin", s.p.eval_node(0.0, last).abs(), WALL_TOL),
    ])
}

pub fn cmd_solve(cfg: &RunConfig, out: &Path, jobs: usize) -> Result<SolveManifest> {
    let dir = ensure_dir(&out.join("solve"))?;
    let fields = ensure_dir(&dir.join("fields"))?;
    let h = build(cfg)?;
    let mut runs = Vec::new();
    for (i, (eps, res)) in run_all(cfg, &h, jobs)?.into_iter().enumerate() {
        let entry = match res {
            Ok(o) => {
                let checks = state_checks(cfg, &o)?;
                let mut files = Vec::new();
                let s = &o.state;
                let approx = &o.orders.last().expect("order 0 always built").composite;
                for (comp, f) in [("u", &s.u), ("v", &s.v), ("p", &s.p), ("ua", &approx.u.f), ("va", &approx.v.f)] {
                    let name = format!("ns_{i}_{comp}");
                    FieldDump::from_field(&name, eps, f).write(&fields.join(format!("{name}.vvlb")))?;
                    files.push(format!("fields/{name}.vvlb"));
                }
                SolveEntry {
                    eps,
                    error: None,
                    iterations: s.log.iterations(),
                    residuals: s.log.residuals.clone(),
                    damping: s.log.damping.clone(),
                    warnings: s.log.warnings.clone(),
                    passed: checks.iter().all(|c| c.passed),
                    checks,
                    files,
                }
            }
            Err(e) => SolveEntry {
                eps,
                error: Some(e.to_string()),
                iterations: 0,
                residuals: vec![],
                damping: vec![],
                warnings: vec![],
                checks: vec![],
                passed: false,
                files: vec![],
            },
        };
        runs.push(entry);
    }
    let m = SolveManifest {
        config_hash: cfg.hash(),
        order: cfg.expansion.order,
        nx: cfg.grid.nx,
        ny: cfg.grid.ny,
        passed: runs.iter().all(|r| r.passed),
        runs,
    };
    write_json(&dir.join("manifest.json"), &m)?;
    Ok(m)
}
