//! `vvlab expand`: the truncated hierarchy with its invariant checks.

use std::path::Path;

use composite::{build_hierarchy, represented_levels, Hierarchy, TermKind, TermReport};
use serde::{Deserialize, Serialize};
use spectral_strip::{Grid1D, StripField};

use crate::config::RunConfig;
use crate::dump::FieldDump;
use crate::error::Result;
use crate::output::{ensure_dir, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value.is_finite() && value <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub kind: String,
    /// Level in thirds of eps.
    pub level: i32,
    pub grid: String,
    pub max_abs: f64,
    pub far_constant: f64,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub name: String,
    pub first: f64,
    pub last: f64,
    pub points: usize,
}

impl GridEntry {
    fn new(name: &str, g: &Grid1D) -> Self {
        Self { name: name.into(), first: g.first(), last: g.last(), points: g.len() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandManifest {
    pub config_hash: String,
    pub order: u32,
    pub levels: Vec<i32>,
    pub far_velocity: f64,
    pub shear: f64,
    /// Largest sample of any layer term or any Euler term above level 0.
    pub max_correction_abs: f64,
    pub trivial: bool,
    pub grids: Vec<GridEntry>,
    pub terms: Vec<TermEntry>,
    pub passed: bool,
}

fn grid_name(kind: TermKind) -> &'static str {
    match kind {
        TermKind::Euler => "strip",
        TermKind::Upper => "zeta",
        TermKind::Lower => "eta",
    }
}

fn term_fields(h: &Hierarchy, kind: TermKind, level: i32) -> [(&'static str, &StripField); 3] {
    match kind {
        TermKind::Euler => {
            let e = &h.euler[&level];
            [("u", &e.u), ("v", &e.v), ("p", &e.p)]
        }
        TermKind::Upper => {
            let t = &h.upper[&level];
            [("u", &t.u.field), ("v", &t.v.field), ("p", &t.p.field)]
        }
        TermKind::Lower => {
            let t = &h.lower[&level];
            [("u", &t.u.field), ("v", &t.v.field), ("p", &t.p.field)]
        }
    }
}

/// Manifest entries of a built hierarchy; writes field dumps when `fields_dir` is given.
pub fn describe(cfg: &RunConfig, h: &Hierarchy, fields_dir: Option<&Path>) -> Result<ExpandManifest> {
    let mut terms = Vec::new();
    let mut max_correction = 0.0f64;
    let reports: Vec<TermReport> = h.reports();
    for r in &reports {
        let mut files = Vec::new();
        for (comp, f) in term_fields(h, r.kind, r.level) {
            if !(r.kind == TermKind::Euler && r.level == 0) {
                max_correction = max_correction.max(f.max_abs());
            }
            if let Some(dir) = fields_dir {
                let name = format!("{}_L{}_{comp}", r.kind.name(), r.level);
                FieldDump::from_field(&name, 0.0, f).write(&dir.join(format!("{name}.vvlb")))?;
                files.push(format!("fields/{name}.vvlb"));
            }
        }
        let checks: Vec<CheckEntry> = r.checks.iter().map(|c| CheckEntry::new(c.name, c.value, c.tolerance)).collect();
        terms.push(TermEntry {
            kind: r.kind.name().into(),
            level: r.level,
            grid: grid_name(r.kind).into(),
            max_abs: r.max_abs,
            far_constant: r.far_constant,
            passed: checks.iter().all(|c| c.passed),
            checks,
            files,
        });
    }
    Ok(ExpandManifest {
        config_hash: cfg.hash(),
        order: h.order,
        levels: represented_levels(h.order)?,
        far_velocity: h.batchelor.far_velocity,
        shear: h.shear,
        max_correction_abs: max_correction,
        trivial: max_correction == 0.0,
        grids: vec![GridEntry::new("strip", &h.strip), GridEntry::new("zeta", &h.zeta), GridEntry::new("eta", &h.eta)],
        passed: terms.iter().all(|t| t.passed),
        terms,
    })
}

pub fn build(cfg: &RunConfig) -> Result<Hierarchy> {
    Ok(build_hierarchy(&cfg.spec(), &cfg.hierarchy(), cfg.expansion.order)?)
}

/// Builds orders `0..=m`, writes `expand/fields/*.vvlb` and `expand/manifest.json` under `out`.
pub fn cmd_expand(cfg: &RunConfig, out: &Path) -> Result<ExpandManifest> {
    let dir = ensure_dir(&out.join("expand"))?;
    let fields = ensure_dir(&dir.join("fields"))?;
    let h = build(cfg)?;
    let m = describe(cfg, &h, Some(&fields))?;
    write_json(&dir.join("manifest.json"), &m)?;
    Ok(m)
}
