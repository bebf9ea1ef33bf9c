//! Builds the expansion level by level: Euler first, then the two layers, then
//! the far constants of the layers are handed back to the Euler term as a linear
//! mean shear.

use std::collections::BTreeMap;

use euler_cascade::{check_shear_selection, divergence, laplacian_max, solve_euler_level, EulerTerm, OUTER_LEVELS};
use lower_layer::{lower_forcing, lower_residual, solve_lower_linear_bl, LowerForcing, LowerLayer, LOWER_STRETCH};
use prandtl_upper::{
    batchelor_constant, leading_layer, solve_upper_linear_bl, upper_forcing, BatchelorConstants, LeadingLayer,
    LinearCoefficients, UpperForcing, UpperLayer, VonMisesConfig, UPPER_STRETCH,
};
use spectral_strip::stretched::{LayerTerms, WallTaylor};
use spectral_strip::{Grid1D, ProblemSpec, Samples};

use crate::error::{CompositeError, Result};

/// Largest hierarchy level (thirds of eps) kept at truncation order `m`.
pub fn max_level(order: u32) -> Result<i32> {
    match order {
        0 => Ok(0),
        1 => Ok(3),
        2 => Ok(5),
        3 => Ok(6),
        m => Err(CompositeError::InvalidOrder(m)),
    }
}

/// Levels `1..=max` that carry terms.
pub fn levels_up_to(max: i32) -> impl Iterator<Item = i32> {
    OUTER_LEVELS.into_iter().filter(move |&l| l > 0 && l <= max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyConfig {
    pub nx: usize,
    /// Intervals of the strip grid in `y`.
    pub ny: usize,
    pub zeta_min: f64,
    pub zeta_intervals: usize,
    pub eta_max: f64,
    pub eta_intervals: usize,
    pub von_mises: VonMisesConfig,
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        Self {
            nx: 32,
            ny: 256,
            zeta_min: -40.0,
            zeta_intervals: 800,
            eta_max: 40.0,
            eta_intervals: 800,
            von_mises: VonMisesConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermKind {
    Euler,
    Upper,
    Lower,
}

impl TermKind {
    pub fn name(self) -> &'static str {
        match self {
            TermKind::Euler => "euler",
            TermKind::Upper => "upper",
            TermKind::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.value <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermReport {
    pub kind: TermKind,
    pub level: i32,
    pub max_abs: f64,
    pub far_constant: f64,
    pub checks: Vec<Check>,
}

impl TermReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub spec: ProblemSpec,
    pub config: HierarchyConfig,
    pub order: u32,
    pub batchelor: BatchelorConstants,
    /// Couette shear of the outer flow (far velocity of the discrete leading layer).
    pub shear: f64,
    pub strip: Grid1D,
    pub zeta: Grid1D,
    pub eta: Grid1D,
    pub leading: LeadingLayer,
    pub euler: BTreeMap<i32, EulerTerm>,
    pub upper: BTreeMap<i32, UpperLayer>,
    pub lower: BTreeMap<i32, LowerLayer>,
    pub upper_forcing: BTreeMap<i32, UpperForcing>,
    pub lower_forcing: BTreeMap<i32, LowerForcing>,
    pub coefficients: Option<LinearCoefficients>,
}

fn negated(v: Vec<f64>) -> Vec<f64> {
    v.into_iter().map(|x| -x).collect()
}

fn broadcast(tr: &[f64], ns: usize) -> Samples {
    let mut s = Samples::zeros(tr.len(), ns);
    for k in 0..ns {
        s.row_mut(k).copy_from_slice(tr);
    }
    s
}

impl Hierarchy {
    pub fn max_level(&self) -> i32 {
        max_level(self.order).expect("validated at build")
    }

    pub fn nx(&self) -> usize {
        self.config.nx
    }

    /// Upper-layer v at level `l`, at the wall.
    pub fn upper_v_trace(&self, l: i32) -> Option<Vec<f64>> {
        self.upper.get(&(l - UPPER_STRETCH)).map(|t| t.v.field.trace(self.zeta.wall_index()))
    }

    /// Lower-layer v at level `l`, at the wall.
    pub fn lower_v_trace(&self, l: i32) -> Option<Vec<f64>> {
        self.lower.get(&(l - LOWER_STRETCH)).map(|t| t.v.field.trace(0))
    }

    fn upper_terms(&self, below: i32) -> LayerTerms {
        let mut t = LayerTerms::default();
        for (&j, l) in self.upper.range(..below) {
            t.u.insert(j, l.u.field.samples());
            t.v.insert(j + UPPER_STRETCH, l.v.field.samples());
            t.p.insert(j + UPPER_STRETCH, l.p.field.samples());
        }
        t
    }

    fn lower_terms(&self, below: i32) -> LayerTerms {
        let mut t = LayerTerms::default();
        for (&j, l) in self.lower.range(..below) {
            t.u.insert(j, l.u.field.samples());
            t.v.insert(j + LOWER_STRETCH, l.v.field.samples());
            t.p.insert(j + LOWER_STRETCH, l.p.field.samples());
        }
        t
    }

    /// Outer wall data for a layer forcing at `top` (the highest level assembled),
    /// plus a bare `v` wall value for each layer `v` whose outer partner is not built yet.
    fn wall_data(&self, at_top: bool, top: i32, stretch: i32) -> Vec<WallTaylor> {
        let mut out: Vec<WallTaylor> = self
            .euler
            .values()
            .map(|e| {
                let count = ((top - e.level.0).max(0) / stretch + 2) as usize;
                e.wall_taylor(at_top, count)
            })
            .collect();
        let layer_v: Vec<(i32, Vec<f64>)> = if at_top {
            self.upper.keys().map(|&j| j + UPPER_STRETCH).filter_map(|l| self.upper_v_trace(l).map(|t| (l, t))).collect()
        } else {
            self.lower.keys().map(|&j| j + LOWER_STRETCH).filter_map(|l| self.lower_v_trace(l).map(|t| (l, t))).collect()
        };
        for (l, tr) in layer_v {
            if !self.euler.contains_key(&l) {
                out.push(WallTaylor::v_only(l, negated(tr)));
            }
        }
        out
    }

    fn solve_level(&mut self, level: i32) -> Result<()> {
        let nx = self.nx();
        let top = negated(self.upper_v_trace(level).unwrap_or_else(|| vec![0.0; nx]));
        let bottom = negated(self.lower_v_trace(level).unwrap_or_else(|| vec![0.0; nx]));
        let lower: Vec<EulerTerm> = self.euler.values().cloned().collect();
        let e = solve_euler_level(level, self.shear, &self.strip, &top, &bottom, &lower)
            .map_err(|e| CompositeError::at("euler", level)(e.into()))?;
        let top_trace = e.u.trace(self.strip.len() - 1);
        let bottom_trace = e.u.trace(0);
        self.euler.insert(level, e);

        if self.coefficients.is_none() {
            let h = self.zeta.spacing();
            let lead = &self.leading.layer;
            let mut drift = lead.v.field.samples();
            let e3 = self.euler[&level].v.trace(self.strip.len() - 1);
            drift.add_assign(&broadcast(&e3, self.zeta.len()), 1.0);
            self.coefficients = Some(LinearCoefficients::from_profile(self.shear, &lead.u.field.samples(), drift, h));
        }
        let up = (|| -> Result<(UpperForcing, UpperLayer)> {
            let taylor = self.wall_data(true, level + UPPER_STRETCH, UPPER_STRETCH);
            let f = upper_forcing(level, &self.zeta, nx, &taylor, &self.upper_terms(level))?;
            let c = self.coefficients.as_ref().expect("set above");
            let layer = solve_upper_linear_bl(&self.zeta, c, &f, &negated(top_trace))?;
            Ok((f, layer))
        })()
        .map_err(CompositeError::at("upper", level))?;

        let low = (|| -> Result<(LowerForcing, LowerLayer)> {
            let taylor = self.wall_data(false, level + 2 * LOWER_STRETCH, LOWER_STRETCH);
            let f = lower_forcing(level, &self.eta, nx, &taylor, &self.lower_terms(level))?;
            let layer = solve_lower_linear_bl(&self.eta, self.shear, &f, &bottom_trace)?;
            Ok((f, layer))
        })()
        .map_err(CompositeError::at("lower", level))?;

        let (a_top, a_bottom) = (up.1.far_constant(), low.1.far_constant());
        self.upper_forcing.insert(level, up.0);
        self.upper.insert(level, up.1);
        self.lower_forcing.insert(level, low.0);
        self.lower.insert(level, low.1);
        self.euler
            .get_mut(&level)
            .expect("inserted above")
            .correct_with_phi(a_top, a_bottom)
            .map_err(|e| CompositeError::at("euler", level)(e.into()))?;
        Ok(())
    }

    /// Invariant checks of every built term.
    pub fn reports(&self) -> Vec<TermReport> {
        let mut out = Vec::new();
        for (&l, e) in &self.euler {
            let (rx, ry) = e.momentum_residual();
            let scale = 1.0 + e.u.max_abs() + e.v.max_abs();
            let mean = e.v.max_mean();
            let mut checks = vec![
                Check { name: "divergence", value: divergence(&e.u, &e.v), tolerance: 1e-10 * scale },
                Check { name: "v_mean", value: mean, tolerance: 1e-12 * scale },
                Check { name: "harmonicity", value: laplacian_max(&e.v), tolerance: 1e-8 * scale },
                Check { name: "momentum_x", value: rx, tolerance: 1e-8 * scale },
                Check { name: "momentum_y", value: ry, tolerance: 1e-8 * scale },
                Check { name: "shear_selection", value: check_shear_selection(&e.u, &e.v), tolerance: 1e-8 },
            ];
            if l > 0 {
                let top = self.upper_v_trace(l).unwrap_or_else(|| vec![0.0; self.nx()]);
                let bot = self.lower_v_trace(l).unwrap_or_else(|| vec![0.0; self.nx()]);
                let vt = e.v.trace(self.strip.len() - 1);
                let vb = e.v.trace(0);
                let wall = vt.iter().zip(&top).chain(vb.iter().zip(&bot)).fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
                checks.push(Check { name: "wall_v", value: wall, tolerance: 1e-12 * scale });
            }
            out.push(TermReport { kind: TermKind::Euler, level: l, max_abs: e.u.max_abs().max(e.v.max_abs()), far_constant: 0.0, checks });
        }
        for (&l, t) in &self.upper {
            let scale = 1.0 + t.u.field.max_abs();
            let w = self.zeta.wall_index();
            let outer = self.euler.get(&l).map(|e| {
                let phi_top = if l == 0 { 0.0 } else { t.far_constant() };
                let tr = e.u.trace(self.strip.len() - 1);
                tr.into_iter().map(|v| v - phi_top).collect::<Vec<_>>()
            });
            let want: Vec<f64> = if l == 0 {
                self.spec.wall_samples(self.nx()).iter().map(|v| v - self.shear).collect()
            } else {
                outer.map(negated).unwrap_or_default()
            };
            let got = t.u.field.trace(w);
            let wall = got.iter().zip(&want).fold(0.0f64, |m, (a, b)| m.max((a + t.far_constant() - b).abs()));
            let far = t.u.field.trace(self.zeta.far_index()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            out.push(TermReport {
                kind: TermKind::Upper,
                level: l,
                max_abs: t.u.field.max_abs(),
                far_constant: t.far_constant(),
                checks: vec![
                    Check { name: "wall_u", value: wall, tolerance: 1e-10 * scale },
                    Check { name: "continuity", value: t.continuity_defect(), tolerance: 1e-3 * scale },
                    Check { name: "v_mean", value: t.v.field.max_mean(), tolerance: 1e-12 * scale },
                    Check { name: "far_decay", value: far, tolerance: 1e-6 * scale },
                ],
            });
        }
        for (&l, t) in &self.lower {
            let scale = 1.0 + t.u.field.max_abs();
            let want = self.euler.get(&l).map(|e| {
                let tr = e.u.trace(0);
                tr.into_iter().map(|v| -(v - t.far_constant())).collect::<Vec<_>>()
            });
            let got = t.wall_trace();
            let wall = want.map_or(f64::INFINITY, |w| got.iter().zip(&w).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())));
            let res = self.lower_forcing.get(&l).map_or(f64::INFINITY, |f| {
                let mut shifted = t.clone();
                for c in shifted.u.field.mode_values_mut(0) {
                    c.re += t.far_constant();
                }
                lower_residual(&shifted, self.shear, f)
            });
            let far = t.u.field.trace(self.eta.far_index()).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            out.push(TermReport {
                kind: TermKind::Lower,
                level: l,
                max_abs: t.u.field.max_abs(),
                far_constant: t.far_constant(),
                checks: vec![
                    Check { name: "wall_u", value: wall, tolerance: 1e-10 * scale },
                    Check { name: "momentum", value: res, tolerance: 1e-8 * scale },
                    Check { name: "continuity", value: t.continuity_defect(), tolerance: 1e-3 * scale },
                    Check { name: "v_mean", value: t.v.field.max_mean(), tolerance: 1e-12 * scale },
                    Check { name: "far_decay", value: far, tolerance: 1e-6 * scale },
                ],
            });
        }
        out
    }
}

/// Solves the expansion up to truncation `order`.
pub fn build_hierarchy(spec: &ProblemSpec, config: &HierarchyConfig, order: u32) -> Result<Hierarchy> {
    let top = max_level(order)?;
    let batchelor = batchelor_constant(spec)?;
    let strip = Grid1D::interval(config.ny)?;
    let zeta = Grid1D::upper_layer(config.zeta_min, config.zeta_intervals)?;
    let eta = Grid1D::lower_layer(config.eta_max, config.eta_intervals)?;
    let leading = leading_layer(spec, config.nx, &zeta, &config.von_mises).map_err(|e| CompositeError::at("upper", 0)(e.into()))?;
    let shear = leading.far_velocity();
    let mut h = Hierarchy {
        spec: spec.clone(),
        config: *config,
        order,
        batchelor,
        shear,
        euler: BTreeMap::from([(0, EulerTerm::couette(shear, config.nx, &strip))]),
        upper: BTreeMap::from([(0, leading.layer.clone())]),
        lower: BTreeMap::new(),
        upper_forcing: BTreeMap::new(),
        lower_forcing: BTreeMap::new(),
        coefficients: None,
        strip,
        zeta,
        eta,
        leading,
    };
    for level in levels_up_to(top) {
        h.solve_level(level)?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_to_level() {
        assert_eq!(max_level(0).unwrap(), 0);
        assert_eq!(max_level(2).unwrap(), 5);
        assert!(matches!(max_level(4), Err(CompositeError::InvalidOrder(4))));
        assert_eq!(levels_up_to(5).collect::<Vec<_>>(), vec![3, 4, 5]);
        assert_eq!(levels_up_to(0).count(), 0);
    }
}
