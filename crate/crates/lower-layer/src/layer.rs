use prandtl_upper::Homogenizer;
use spectral_strip::{fd, fourier, Complex64, EpsPower, Grid1D, LayerField, ModalField, Samples};

use crate::error::{LowerError, Result};
use crate::forcing::LowerForcing;
use crate::mode::{apply_mode, nonzero_mode_solve, weighted_tail, zero_mode_solve, DECAY_TOL};

/// Wall-trace means below this (relative) count as zero.
pub const MEAN_TOL: f64 = 1e-10;

/// One order of the lower layer: `u` at `eps^(j/3)`, `v` and `p` two thirds higher.
#[derive(Debug, Clone)]
pub struct LowerLayer {
    pub level: EpsPower,
    pub u: LayerField,
    pub v: LayerField,
    /// Decaying part `-int_eta^inf g` of the pressure.
    pub p: LayerField,
    /// x-only part `A int_0^x v(x', 0) dx'` of the pressure.
    pub p_wall: Vec<f64>,
}

impl LowerLayer {
    pub fn far_constant(&self) -> f64 {
        self.u.far_constant
    }

    /// Wall trace of the physical layer (far constant restored).
    pub fn wall_trace(&self) -> Vec<f64> {
        self.u.field.trace(0).iter().map(|v| v + self.u.far_constant).collect()
    }

    /// `max |u_x + v_eta|`.
    pub fn continuity_defect(&self) -> f64 {
        let d = self.u.field.ddx().add(&self.v.field.dds(), 1.0).expect("same grids");
        d.max_abs()
    }

    /// Full pressure at profile node `k`.
    pub fn pressure_trace(&self, k: usize) -> Vec<f64> {
        self.p.field.trace(k).iter().zip(&self.p_wall).map(|(a, b)| a + b).collect()
    }
}

fn nyquist(f: &ModalField) -> usize {
    f.nx() / 2
}

/// Applies the lower-layer operator `A eta u_x + A v(u) - u_etaeta` mode by mode.
/// Row 0 (the wall) is zero.
pub fn apply_lower(a: f64, u: &ModalField) -> ModalField {
    let h = u.grid().spacing();
    let mut out = ModalField::zeros(u.nx(), u.grid());
    for n in 0..nyquist(u) {
        let r = apply_mode(n as i64, u.mode_values(n), a, h);
        out.mode_values_mut(n).copy_from_slice(&r);
    }
    out
}

/// `kappa(eta) c(x)`.
pub fn lift_field(wall: &[f64], eta: &Grid1D) -> Result<ModalField> {
    let kappa = Homogenizer::lower();
    let nx = wall.len();
    let mut s = Samples::zeros(nx, eta.len());
    for (k, &e) in eta.nodes().iter().enumerate() {
        let kv = kappa.value(e);
        s.row_mut(k).iter_mut().zip(wall).for_each(|(o, w)| *o = kv * w);
    }
    Ok(ModalField::from_samples(&s, eta)?)
}

/// Right-hand side for the homogeneous-wall unknown `w = u + kappa c`, where
/// `c = u_e(x, 0)` and the physical layer must satisfy `u(x, 0) = -c`.
pub fn homogenize_lower(wall: &[f64], f: &ModalField, a: f64) -> Result<ModalField> {
    let lift = lift_field(wall, f.grid())?;
    Ok(f.add(&apply_lower(a, &lift), 1.0)?)
}

/// `v(x, eta) = int_eta^inf u_x`, pinned to 0 at `eta_max`.
pub fn v_hat_from_continuity(u: &LayerField) -> Result<LayerField> {
    let f = &u.field;
    let far = f.grid().far_index();
    let scale = 1.0 + f.max_abs();
    let tail = (1..f.mode_count()).fold(0.0f64, |m, n| m.max(f.mode_values(n)[far].norm()));
    if tail > DECAY_TOL * scale {
        return Err(LowerError::NotDecaying { what: "lower u-layer", tail });
    }
    let h = f.grid().spacing();
    let mut v = ModalField::zeros(f.nx(), f.grid()).named(format!("v[{}]", f.name), EpsPower(f.exponent.0 + 2));
    for n in 1..nyquist(f) {
        let vals = crate::mode::mode_v_from_u(n as i64, f.mode_values(n), h);
        v.mode_values_mut(n).copy_from_slice(&vals);
    }
    Ok(LayerField::new(v, 0.0))
}

/// `-int_eta^inf g`, mode by mode.
pub fn decaying_pressure(g: &ModalField) -> Result<ModalField> {
    let h = g.grid().spacing();
    for n in 0..g.mode_count() {
        let tail = weighted_tail(g.mode_values(n), h);
        if tail > DECAY_TOL {
            return Err(LowerError::NotDecaying { what: "pressure source", tail });
        }
    }
    let mut p = ModalField::zeros(g.nx(), g.grid()).named(format!("p[{}]", g.name), g.exponent);
    for n in 0..g.mode_count() {
        let vals: Vec<Complex64> = fd::cumtrapz_rev(g.mode_values(n), h).into_iter().map(|c| -c).collect();
        p.mode_values_mut(n).copy_from_slice(&vals);
    }
    Ok(p)
}

/// `A int_0^x v(x', 0) dx'`; the trace must have zero mean.
pub fn wall_pressure(wall_v: &[f64], a: f64) -> Result<Vec<f64>> {
    let m = fourier::mean(wall_v);
    let scale = 1.0 + wall_v.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if m.abs() > MEAN_TOL * scale {
        return Err(LowerError::NonZeroMean(m));
    }
    let anti = fourier::antiderivative(wall_v);
    Ok(anti.iter().map(|v| a * (v - anti[0])).collect())
}

/// Full pressure `-int_eta^inf g + A int_0^x v(x', 0) dx'`.
pub fn lower_pressure(g: &ModalField, wall_v: &[f64], a: f64) -> Result<LayerField> {
    let mut p = decaying_pressure(g)?;
    let w = wall_pressure(wall_v, a)?;
    let half = fourier::forward_half(&w);
    for (n, c) in half.into_iter().enumerate() {
        p.mode_values_mut(n).iter_mut().for_each(|v| *v += c);
    }
    Ok(LayerField::new(p, 0.0))
}

/// Solves the lower layer for the u-level `forcing.level` with wall data
/// `u(x, 0) = -wall(x)` (`wall` is the outer trace at `y = 0`). The far constant
/// of `u` is shifted off and recorded.
pub fn solve_lower_linear_bl(eta: &Grid1D, a: f64, forcing: &LowerForcing, wall: &[f64]) -> Result<LowerLayer> {
    let level = forcing.level;
    let f = ModalField::from_samples(&forcing.f, eta)?;
    let ft = homogenize_lower(wall, &f, a)?;
    let h = eta.spacing();
    let mut w = ModalField::zeros(f.nx(), eta);
    let (u0, _) = zero_mode_solve(&ft.mean_profile(), h)?;
    for (c, v) in w.mode_values_mut(0).iter_mut().zip(&u0) {
        *c = Complex64::new(*v, 0.0);
    }
    for n in 1..nyquist(&f) {
        let (un, _) = nonzero_mode_solve(n as i64, ft.mode_values(n), a, h)?;
        w.mode_values_mut(n).copy_from_slice(&un);
    }
    let mut u = w.add(&lift_field(wall, eta)?, -1.0)?.named("u_b", EpsPower(level));
    let far = u.mode_values(0)[eta.far_index()].re;
    u.mode_values_mut(0).iter_mut().for_each(|c| c.re -= far);
    let u = LayerField::new(u, far);
    let v = v_hat_from_continuity(&u)?;
    let p = forcing.pressure.clone();
    let p_wall = wall_pressure(&v.field.trace(0), a)?;
    Ok(LowerLayer { level: EpsPower(level), u, v, p: LayerField::new(p, 0.0), p_wall })
}

/// Largest residual of the discrete lower-layer system over interior and far rows.
pub fn lower_residual(layer: &LowerLayer, a: f64, forcing: &LowerForcing) -> f64 {
    let eta = layer.u.field.grid();
    let f = match ModalField::from_samples(&forcing.f, eta) {
        Ok(f) => f,
        Err(_) => return f64::INFINITY,
    };
    let mut r = apply_lower(a, &layer.u.field);
    for n in 0..nyquist(&f) {
        let fv = f.mode_values(n).to_vec();
        let rv = r.mode_values_mut(n);
        rv[0] = Complex64::new(0.0, 0.0);
        for k in 1..rv.len() {
            rv[k] -= fv[k];
        }
    }
    r.max_abs()
}
