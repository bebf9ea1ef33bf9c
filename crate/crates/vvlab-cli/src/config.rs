//! Run configuration: TOML with one table per concern.

use std::path::{Path, PathBuf};

use composite::HierarchyConfig;
use ns_solver::{required_ny, NsConfig};
use prandtl_upper::VonMisesConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use spectral_strip::{Forcing, ProblemSpec};

use crate::error::{CliError, Result};

/// Smallest accepted grid size of any kind.
pub const MIN_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub alpha: f64,
    pub delta: f64,
    /// `(n, cos coefficient, sin coefficient)` triples of `f`.
    pub forcing: Vec<(u32, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpansionSection {
    pub order: u32,
    pub epsilons: Vec<f64>,
}

impl Default for ExpansionSection {
    fn default() -> Self {
        Self { order: 1, epsilons: vec![0.2, 0.1, 0.05] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub nx: usize,
    /// y-intervals of the strip.
    pub ny: usize,
    pub n_psi: usize,
    pub n_zeta: usize,
    pub n_eta: usize,
    /// `psi_min = -psi_extent * A`.
    pub psi_extent: f64,
    pub zeta_min: f64,
    pub eta_max: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        let h = HierarchyConfig::default();
        let vm = VonMisesConfig::default();
        Self {
            nx: h.nx,
            ny: h.ny,
            n_psi: vm.intervals,
            n_zeta: h.zeta_intervals,
            n_eta: h.eta_intervals,
            psi_extent: vm.extent,
            zeta_min: h.zeta_min,
            eta_max: h.eta_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub newton_tol: f64,
    pub newton_max_iterations: usize,
    pub max_halvings: usize,
    pub von_mises_tol: f64,
    pub von_mises_max_iterations: usize,
    pub allow_underresolved: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        let ns = NsConfig::default();
        let vm = VonMisesConfig::default();
        Self {
            newton_tol: ns.tol,
            newton_max_iterations: ns.max_iterations,
            max_halvings: ns.max_halvings,
            von_mises_tol: vm.tol,
            von_mises_max_iterations: vm.max_iterations,
            allow_underresolved: ns.allow_underresolved,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("vvlab-out") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub seed: u64,
    /// Random fields per inequality suite.
    pub samples: usize,
    /// Amplitudes whose hierarchies are checked term by term.
    pub deltas: Vec<f64>,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { seed: 20_240_601, samples: 100, deltas: vec![0.05, 0.1, 0.2] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub expansion: ExpansionSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub verify: VerifySection,
}

/// Parses and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Minimal valid config for the given wall data; every other field takes its default.
    pub fn new(alpha: f64, delta: f64, forcing: Vec<(u32, f64, f64)>) -> Self {
        Self {
            problem: ProblemSection { alpha, delta, forcing },
            expansion: ExpansionSection::default(),
            grid: GridSection::default(),
            solver: SolverSection::default(),
            output: OutputSection::default(),
            verify: VerifySection::default(),
        }
    }

    /// Every violated invariant, one message per field.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let g = &self.grid;
        for (name, v) in [("grid.nx", g.nx), ("grid.ny", g.ny), ("grid.n_psi", g.n_psi), ("grid.n_zeta", g.n_zeta), ("grid.n_eta", g.n_eta)] {
            if v < MIN_SIZE {
                out.push(format!("{name} = {v} is below {MIN_SIZE}"));
            }
        }
        if g.nx % 2 != 0 {
            out.push(format!("grid.nx = {} must be even", g.nx));
        }
        for (name, v) in [("grid.psi_extent", g.psi_extent), ("grid.eta_max", g.eta_max), ("grid.zeta_min", -g.zeta_min)] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} must be {} and finite", if name == "grid.zeta_min" { "negative" } else { "positive" }));
            }
        }

        let p = &self.problem;
        if !(p.alpha > 0.0 && p.alpha.is_finite()) {
            out.push(format!("problem.alpha = {} must be positive", p.alpha));
        }
        if !(p.delta >= 0.0 && p.delta.is_finite()) {
            out.push(format!("problem.delta = {} must be nonnegative", p.delta));
        }
        for (i, &(n, a, b)) in p.forcing.iter().enumerate() {
            if 4 * n as usize > g.nx {
                out.push(format!("problem.forcing[{i}]: mode {n} exceeds the band limit nx/4 = {}", g.nx / 4));
            }
            if !(a.is_finite() && b.is_finite()) {
                out.push(format!("problem.forcing[{i}]: coefficients must be finite"));
            }
        }
        if out.iter().all(|m| !m.starts_with("problem.")) {
            if let Err(e) = self.spec().validate() {
                out.push(format!("problem: {e}"));
            }
        }

        let e = &self.expansion;
        if e.order > 3 {
            out.push(format!("expansion.order = {} is not in 0..=3", e.order));
        }
        if e.epsilons.is_empty() {
            out.push("expansion.epsilons is empty".into());
        }
        for (i, &eps) in e.epsilons.iter().enumerate() {
            if !(eps > 0.0 && eps < 1.0) {
                out.push(format!("expansion.epsilons[{i}] = {eps} is not in (0, 1)"));
            }
        }
        if e.epsilons.windows(2).any(|w| !(w[0] > w[1])) {
            out.push("expansion.epsilons must be strictly descending".into());
        }
        if let Some(&smallest) = e.epsilons.last() {
            if smallest > 0.0 && !self.solver.allow_underresolved && g.ny < required_ny(smallest) {
                out.push(format!(
                    "grid.ny = {} under-resolves eps = {smallest} (needs {}; set solver.allow_underresolved to override)",
                    g.ny,
                    required_ny(smallest)
                ));
            }
        }

        let s = &self.solver;
        for (name, v) in [("solver.newton_tol", s.newton_tol), ("solver.von_mises_tol", s.von_mises_tol)] {
            if !(v > 0.0) {
                out.push(format!("{name} = {v} must be positive"));
            }
        }
        for (name, v) in [("solver.newton_max_iterations", s.newton_max_iterations), ("solver.von_mises_max_iterations", s.von_mises_max_iterations)] {
            if v == 0 {
                out.push(format!("{name} must be at least 1"));
            }
        }

        if self.verify.samples == 0 {
            out.push("verify.samples must be at least 1".into());
        }
        for (i, &d) in self.verify.deltas.iter().enumerate() {
            if !(d >= 0.0 && d.is_finite()) {
                out.push(format!("verify.deltas[{i}] = {d} must be nonnegative"));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(CliError::Invalid(v))
        }
    }

    pub fn spec(&self) -> ProblemSpec {
        self.spec_with_delta(self.problem.delta)
    }

    pub fn spec_with_delta(&self, delta: f64) -> ProblemSpec {
        ProblemSpec::new(self.problem.alpha, delta, Forcing::new(self.problem.forcing.clone()))
    }

    pub fn von_mises(&self) -> VonMisesConfig {
        VonMisesConfig {
            extent: self.grid.psi_extent,
            intervals: self.grid.n_psi,
            tol: self.solver.von_mises_tol,
            max_iterations: self.solver.von_mises_max_iterations,
        }
    }

    pub fn hierarchy(&self) -> HierarchyConfig {
        HierarchyConfig {
            nx: self.grid.nx,
            ny: self.grid.ny,
            zeta_min: self.grid.zeta_min,
            zeta_intervals: self.grid.n_zeta,
            eta_max: self.grid.eta_max,
            eta_intervals: self.grid.n_eta,
            von_mises: self.von_mises(),
        }
    }

    pub fn ns(&self) -> NsConfig {
        NsConfig {
            nx: self.grid.nx,
            ny: self.grid.ny,
            tol: self.solver.newton_tol,
            max_iterations: self.solver.newton_max_iterations,
            max_halvings: self.solver.max_halvings,
            allow_underresolved: self.solver.allow_underresolved,
        }
    }

    /// SHA-256 of the canonical JSON form, output directory excluded. Hex, 16 digits.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputSection { dir: PathBuf::new() };
        let json = serde_json::to_vec(&c).expect("config serializes");
        let digest = Sha256::digest(&json);
        format!("{digest:x}")[..16].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[problem]\nalpha = 1.0\ndelta = 0.1\nforcing = [[1, 1.0, 0.0]]\n";

    #[test]
    fn minimal_file_takes_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c, RunConfig::new(1.0, 0.1, vec![(1, 1.0, 0.0)]));
        assert_eq!(c.expansion.epsilons, vec![0.2, 0.1, 0.05]);
        assert_eq!(c.grid.nx, 32);
    }

    #[test]
    fn epsilon_out_of_range_names_the_field() {
        let text = format!("{MINIMAL}[expansion]\nepsilons = [1.5, 0.1]\n");
        let Err(CliError::Invalid(v)) = parse_config(&text) else { panic!("accepted") };
        assert!(v.iter().any(|m| m.contains("expansion.epsilons[0]")), "{v:?}");
    }

    #[test]
    fn forcing_beyond_band_limit_rejected() {
        let text = MINIMAL.replace("[[1, 1.0, 0.0]]", "[[9, 1.0, 0.0]]");
        let Err(CliError::Invalid(v)) = parse_config(&text) else { panic!("accepted") };
        assert!(v.iter().any(|m| m.contains("band limit")), "{v:?}");
    }

    #[test]
    fn every_violation_is_listed() {
        let text = format!("{}[expansion]\nepsilons = [0.05, 0.1]\norder = 7\n[grid]\nnx = 4\nn_eta = 2\n", MINIMAL.replace("delta = 0.1", "delta = -1.0").replace("[[1,", "[[2,"));
        let Err(CliError::Invalid(v)) = parse_config(&text) else { panic!("accepted") };
        for key in ["grid.nx", "grid.n_eta", "problem.delta", "expansion.order", "descending", "band limit"] {
            assert!(v.iter().any(|m| m.contains(key)), "{key} missing from {v:?}");
        }
    }

    #[test]
    fn unknown_keys_and_syntax_errors_rejected() {
        assert!(matches!(parse_config(&format!("{MINIMAL}[grid]\nnz = 3\n")), Err(CliError::Parse(_))));
        assert!(matches!(parse_config("[problem\nalpha = 1"), Err(CliError::Parse(_))));
    }

    #[test]
    fn hash_ignores_output_dir_only() {
        let a = RunConfig::new(1.0, 0.1, vec![(1, 1.0, 0.0)]);
        let mut b = a.clone();
        b.output.dir = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.problem.delta = 0.2;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
