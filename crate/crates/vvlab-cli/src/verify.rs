//! `vvlab verify`: property suites with a machine-readable report.

use std::f64::consts::PI;
use std::path::Path;

use composite::{build_hierarchy, Hierarchy};
use euler_cascade::check_shear_selection;
use ns_solver::sobolev_embedding_check;
use prandtl_upper::solve_von_mises;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spectral_strip::hardy::{hardy_check, HardyVariant};
use spectral_strip::{Grid1D, StripField};

use crate::config::RunConfig;
use crate::error::Result;
use crate::expand::{describe, CheckEntry};
use crate::output::{ensure_dir, write_json};

pub const HARDY_KAPPAS: [f64; 4] = [0.0, 0.25, 0.5, 0.9];
/// Frozen constant of the anisotropic embedding `||u||_inf <= C (...)`.
pub const EMBEDDING_C: f64 = 2.0;
pub const BATCHELOR_TOL: f64 = 1e-10;
pub const INVARIANT_TOL: f64 = 1e-6;
pub const SHEAR_SELECTION_TOL: f64 = 1e-8;
const HARDY_INTERVALS: usize = 1000;
const EMBEDDING_NX: usize = 16;
const EMBEDDING_INTERVALS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Hardy,
    Embedding,
    BatchelorWood,
    Hierarchy,
    ShearSelection,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Hardy, Suite::Embedding, Suite::BatchelorWood, Suite::Hierarchy, Suite::ShearSelection];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hardy => "hardy",
            Suite::Embedding => "embedding",
            Suite::BatchelorWood => "batchelor_wood",
            Suite::Hierarchy => "hierarchy",
            Suite::ShearSelection => "shear_selection",
        }
    }
}

/// Test hook: corrupts one seeded entry of `suite` after it is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub suite: Suite,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub entries: Vec<CheckEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub config_hash: String,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn suite(&self, s: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|r| r.name == s.name())
    }
}

fn random_poly(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let degree = rng.gen_range(0..6);
    (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn horner(c: &[f64], y: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * y + a)
}

/// Largest `lhs / rhs` per (variant, kappa) over random polynomials with the required zeros.
pub fn hardy_suite(samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<CheckEntry>> {
    let g = Grid1D::interval(HARDY_INTERVALS)?;
    let mut worst = vec![0.0f64; HARDY_KAPPAS.len() + 2];
    for _ in 0..samples {
        let c = random_poly(rng);
        let top: Vec<f64> = g.nodes().iter().map(|&y| (1.0 - y) * horner(&c, y)).collect();
        let both: Vec<f64> = g.nodes().iter().map(|&y| y * (1.0 - y) * horner(&c, y)).collect();
        let mut ratio = |k: usize, (l, r): (f64, f64)| {
            if r > 0.0 {
                worst[k] = worst[k].max(l / r);
            } else if l > 0.0 {
                worst[k] = f64::INFINITY;
            }
        };
        for (k, &kappa) in HARDY_KAPPAS.iter().enumerate() {
            ratio(k, hardy_check(&top, &g, kappa, HardyVariant::Weighted)?);
        }
        ratio(HARDY_KAPPAS.len(), hardy_check(&both, &g, 0.0, HardyVariant::LowerWall)?);
        ratio(HARDY_KAPPAS.len() + 1, hardy_check(&both, &g, 0.0, HardyVariant::UpperWall)?);
    }
    let mut out: Vec<CheckEntry> = HARDY_KAPPAS.iter().zip(&worst).map(|(k, w)| CheckEntry::new(format!("weighted_kappa_{k}"), *w, 1.0)).collect();
    out.push(CheckEntry::new("lower_wall", worst[HARDY_KAPPAS.len()], 1.0));
    out.push(CheckEntry::new("upper_wall", worst[HARDY_KAPPAS.len() + 1], 1.0));
    Ok(out)
}

/// Random field vanishing on both walls, built from eight shapes.
fn random_wall_field(g: &Grid1D, c: [f64; 8]) -> StripField {
    StripField::from_fn(EMBEDDING_NX, g, move |x, y| {
        let b = y * (1.0 - y);
        c[0] * b + c[1] * b * b * 8.0
            + c[2] * x.cos() * (PI * y).sin()
            + c[3] * (2.0 * x).sin() * (2.0 * PI * y).sin()
            + c[4] * (3.0 * x + 1.0).cos() * b * (5.0 * y).cos()
            + c[5] * (x - 0.3).sin() * (PI * y).sin().powi(3)
            + c[6] * (4.0 * x).cos() * (3.0 * PI * y).sin()
            + c[7] * b * y
    })
}

/// Largest `||(u,v)||_inf / (C * rhs)` over random admissible pairs.
pub fn embedding_suite(samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<CheckEntry>> {
    let g = Grid1D::interval(EMBEDDING_INTERVALS)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut draw = || std::array::from_fn::<f64, 8, _>(|_| rng.gen_range(-1.0..1.0));
        let (u, v) = (random_wall_field(&g, draw()), random_wall_field(&g, draw()));
        let (lhs, rhs) = sobolev_embedding_check(&u, &v)?;
        worst = worst.max(lhs / (EMBEDDING_C * rhs));
    }
    Ok(vec![CheckEntry::new("anisotropic_embedding", worst, 1.0)])
}

/// Mean square of the wall data in closed form.
pub fn batchelor_closed_form(cfg: &RunConfig) -> f64 {
    let p = &cfg.problem;
    let mut mean = p.alpha;
    let mut osc = 0.0;
    for &(n, a, b) in &p.forcing {
        if n == 0 {
            mean += p.delta * a;
        } else {
            osc += 0.5 * p.delta * p.delta * (a * a + b * b);
        }
    }
    (mean * mean + osc).sqrt()
}

pub fn batchelor_wood_suite(cfg: &RunConfig) -> Result<Vec<CheckEntry>> {
    let vm = solve_von_mises(&cfg.spec(), cfg.grid.nx, &cfg.von_mises())?;
    Ok(vec![
        CheckEntry::new("far_velocity", (vm.far_velocity() - batchelor_closed_form(cfg)).abs(), BATCHELOR_TOL),
        CheckEntry::new("invariant", vm.invariant_defect(), INVARIANT_TOL),
        CheckEntry::new("von_mises_residual", vm.residual_norm(), cfg.solver.von_mises_tol),
    ])
}

/// Every check of every term, for each amplitude in `verify.deltas`.
pub fn hierarchy_suite(cfg: &RunConfig, base: &Hierarchy) -> Result<Vec<CheckEntry>> {
    let mut out = Vec::new();
    for &delta in &cfg.verify.deltas {
        let owned;
        let h = if delta == cfg.problem.delta {
            base
        } else {
            owned = build_hierarchy(&cfg.spec_with_delta(delta), &cfg.hierarchy(), cfg.expansion.order)?;
            &owned
        };
        for t in describe(cfg, h, None)?.terms {
            for c in t.checks {
                out.push(CheckEntry { name: format!("delta_{delta}/{}_L{}/{}", t.kind, t.level, c.name), ..c });
            }
        }
    }
    Ok(out)
}

/// `|int v_e du_e/dy dx|` of the first outer correction.
pub fn shear_selection_suite(base: &Hierarchy) -> Vec<CheckEntry> {
    base.euler
        .range(1..)
        .next()
        .map(|(l, e)| vec![CheckEntry::new(format!("euler_L{l}"), check_shear_selection(&e.u, &e.v), SHEAR_SELECTION_TOL)])
        .unwrap_or_default()
}

fn inject(entries: &mut [CheckEntry], seed: u64) {
    if entries.is_empty() {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(0..entries.len());
    let e = &mut entries[k];
    e.value = e.value.abs() + e.tolerance.abs() * (1.0 + rng.gen_range(0.5..1.5)) + rng.gen_range(1e-6..1e-3);
    e.passed = false;
}

/// Runs every suite; `fault` corrupts one entry of the named suite.
pub fn run_verify(cfg: &RunConfig, fault: Option<Fault>) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.verify.seed);
    let base = build_hierarchy(&cfg.spec(), &cfg.hierarchy(), cfg.expansion.order)?;
    let mut suites = Vec::new();
    for s in Suite::ALL {
        let mut entries = match s {
            Suite::Hardy => hardy_suite(cfg.verify.samples, &mut rng)?,
            Suite::Embedding => embedding_suite(cfg.verify.samples, &mut rng)?,
            Suite::BatchelorWood => batchelor_wood_suite(cfg)?,
            Suite::Hierarchy => hierarchy_suite(cfg, &base)?,
            Suite::ShearSelection => shear_selection_suite(&base),
        };
        if let Some(f) = fault.filter(|f| f.suite == s) {
            inject(&mut entries, f.seed);
        }
        suites.push(SuiteReport { name: s.name().into(), passed: entries.iter().all(|e| e.passed), entries });
    }
    Ok(VerifyReport { config_hash: cfg.hash(), seed: cfg.verify.seed, passed: suites.iter().all(|s| s.passed), suites })
}

/// Writes `verify/report.json` under `out`.
pub fn cmd_verify(cfg: &RunConfig, out: &Path, fault: Option<Fault>) -> Result<VerifyReport> {
    let dir = ensure_dir(&out.join("verify"))?;
    let r = run_verify(cfg, fault)?;
    write_json(&dir.join("report.json"), &r)?;
    Ok(r)
}
