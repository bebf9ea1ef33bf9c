//! `vvlab sweep`: convergence table over eps with fitted log-log slopes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::Result;
use crate::expand::{build, CheckEntry};
use crate::output::{ensure_dir, sig17, write_csv, write_json};
use crate::rate::{fit_rate, RateFit};
use crate::run::run_all;

/// Columns whose largest entry is below this are round-off; their slopes are not fitted.
pub const DEGENERATE: f64 = 1e-12;
/// Smallest accepted slope of the leading error, with its fit quality.
pub const LEADING_RATE: f64 = 0.8;
pub const LEADING_R2: f64 = 0.95;
/// Bound on `||v||_inf / eps`.
pub const V_CONSTANT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub failed: Option<String>,
    /// `||u - A y - u_p^(0)||_inf`.
    pub u_leading_inf: f64,
    pub v_inf: f64,
    /// `||u - u^a||_inf` for orders `0..=m`.
    pub u_approx_inf: Vec<f64>,
    /// `||R^a||_2` for orders `0..=m`.
    pub residual_l2: Vec<f64>,
    pub newton_iterations: usize,
    pub converged: bool,
    pub config_hash: String,
    /// Wall-clock time; kept out of the deterministic outputs.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnFit {
    pub column: String,
    pub fit: Option<RateFit>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub config_hash: String,
    pub order: u32,
    pub rows: Vec<SweepRow>,
    pub fits: Vec<ColumnFit>,
    pub checks: Vec<CheckEntry>,
    pub passed: bool,
}

impl ConvergenceTable {
    pub fn fit(&self, column: &str) -> Option<RateFit> {
        self.fits.iter().find(|f| f.column == column).and_then(|f| f.fit)
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut c = vec!["u_leading_inf".to_string(), "v_inf".to_string()];
        for m in 0..=self.order {
            c.push(format!("u_approx_inf_m{m}"));
        }
        for m in 0..=self.order {
            c.push(format!("residual_l2_m{m}"));
        }
        c
    }

    fn column(&self, name: &str) -> Vec<f64> {
        let m = self.order as usize + 1;
        let names = self.column_names();
        let idx = names.iter().position(|n| n == name).expect("known column");
        self.rows
            .iter()
            .map(|r| match idx {
                0 => r.u_leading_inf,
                1 => r.v_inf,
                k if k < 2 + m => r.u_approx_inf[k - 2],
                k => r.residual_l2[k - 2 - m],
            })
            .collect()
    }
}

fn fit_column(table: &ConvergenceTable, name: &str) -> ColumnFit {
    let ok: Vec<&SweepRow> = table.rows.iter().filter(|r| r.failed.is_none() && r.converged).collect();
    let eps: Vec<f64> = ok.iter().map(|r| r.eps).collect();
    let all = table.column(name);
    let vals: Vec<f64> = table.rows.iter().zip(all).filter(|(r, _)| r.failed.is_none() && r.converged).map(|(_, v)| v).collect();
    if vals.iter().all(|v| v.abs() < DEGENERATE) {
        return ColumnFit { column: name.into(), fit: None, note: Some("degenerate: column is round-off".into()) };
    }
    match fit_rate(&eps, &vals) {
        Ok(f) => ColumnFit { column: name.into(), fit: Some(f), note: None },
        Err(e) => ColumnFit { column: name.into(), fit: None, note: Some(e.to_string()) },
    }
}

/// Runs the sweep without writing anything.
pub fn sweep_table(cfg: &RunConfig, jobs: usize) -> Result<ConvergenceTable> {
    let h = build(cfg)?;
    let hash = cfg.hash();
    let n = cfg.expansion.order as usize + 1;
    let mut rows = Vec::new();
    for (eps, res) in run_all(cfg, &h, jobs)? {
        rows.push(match res {
            Ok(o) => SweepRow {
                eps,
                failed: None,
                u_leading_inf: o.errors.u_leading_inf,
                v_inf: o.errors.v_inf,
                u_approx_inf: o.orders.iter().map(|k| k.u_error_inf).collect(),
                residual_l2: o.orders.iter().map(|k| k.residual.total()).collect(),
                newton_iterations: o.state.log.iterations(),
                converged: o.state.converged(),
                config_hash: hash.clone(),
                seconds: o.seconds,
            },
            Err(e) => SweepRow {
                eps,
                failed: Some(e.to_string()),
                u_leading_inf: f64::NAN,
                v_inf: f64::NAN,
                u_approx_inf: vec![f64::NAN; n],
                residual_l2: vec![f64::NAN; n],
                newton_iterations: 0,
                converged: false,
                config_hash: hash.clone(),
                seconds: 0.0,
            },
        });
    }
    let mut table = ConvergenceTable { config_hash: hash, order: cfg.expansion.order, rows, fits: vec![], checks: vec![], passed: false };
    table.fits = table.column_names().iter().map(|c| fit_column(&table, c)).collect();

    let mut checks = vec![CheckEntry::new("all_converged", table.rows.iter().filter(|r| !r.converged).count() as f64, 0.0)];
    let v_ratio = table.rows.iter().filter(|r| r.converged).map(|r| r.v_inf / r.eps).fold(0.0f64, f64::max);
    checks.push(CheckEntry::new("v_over_eps", v_ratio, V_CONSTANT));
    if let Some(f) = table.fit("u_leading_inf") {
        // reported as shortfalls so that every check reads value <= tolerance
        checks.push(CheckEntry::new("leading_rate_shortfall", LEADING_RATE - f.slope, 0.0));
        checks.push(CheckEntry::new("leading_r2_shortfall", LEADING_R2 - f.r_squared, 0.0));
    }
    if table.order >= 1 {
        if let (Some(f0), Some(f1)) = (table.fit("u_approx_inf_m0"), table.fit("u_approx_inf_m1")) {
            checks.push(CheckEntry::new("hierarchy_slope_gain", f0.slope - f1.slope, 0.0));
        }
    }
    table.passed = checks.iter().all(|c| c.passed);
    table.checks = checks;
    Ok(table)
}

fn csv_rows(t: &ConvergenceTable) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["eps".to_string()];
    header.extend(t.column_names());
    header.extend(["newton_iterations", "converged", "failed", "config_hash"].map(String::from));
    let rows = t
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![sig17(r.eps), sig17(r.u_leading_inf), sig17(r.v_inf)];
            row.extend(r.u_approx_inf.iter().map(|v| sig17(*v)));
            row.extend(r.residual_l2.iter().map(|v| sig17(*v)));
            row.push(r.newton_iterations.to_string());
            row.push(r.converged.to_string());
            row.push(r.failed.clone().unwrap_or_default());
            row.push(r.config_hash.clone());
            row
        })
        .collect();
    (header, rows)
}

/// Writes `sweep/table.csv`, `sweep/table.json` and the non-deterministic `sweep/timing.csv`.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path, jobs: usize) -> Result<ConvergenceTable> {
    let dir = ensure_dir(&out.join("sweep"))?;
    let t = sweep_table(cfg, jobs)?;
    let (header, rows) = csv_rows(&t);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&dir.join("table.csv"), &header, &rows)?;
    write_json(&dir.join("table.json"), &t)?;
    let timing: Vec<Vec<String>> = t.rows.iter().map(|r| vec![sig17(r.eps), format!("{:.3}", r.seconds)]).collect();
    write_csv(&dir.join("timing.csv"), &["eps", "seconds"], &timing)?;
    Ok(t)
}
