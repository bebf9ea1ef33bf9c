//! Outer terms: harmonic `v`, its continuity partner `u`, and the pressure.

use spectral_strip::stretched::WallTaylor;
use spectral_strip::{fd, Complex64, EpsPower, Grid1D, ModalField, StripField};

use crate::error::{EulerError, Result};
use crate::forcing::{euler_forcing, EulerForcing};
use crate::harmonic::{harmonic_data, HarmonicData};

/// Outer levels (thirds of eps) present up to third order.
pub const OUTER_LEVELS: [i32; 5] = [0, 3, 4, 5, 6];

/// Relative tolerances of the consistency checks.
pub const COMPAT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct EulerTerm {
    pub level: EpsPower,
    /// Couette velocity `A` of the base flow `u = A y`.
    pub shear: f64,
    pub u: StripField,
    pub v: StripField,
    pub p: StripField,
    pub forcing: EulerForcing,
    /// Shear correction added to the x-mean of `u`.
    pub phi: Vec<f64>,
    /// Closed-form wall data of the oscillating part.
    pub harmonic: HarmonicData,
    /// x-mean of `u` as `(value at y = 0, slope)`; it is always linear.
    pub mean_line: (f64, f64),
}

impl EulerTerm {
    /// Base flow `u = A y`, `v = p = 0`.
    pub fn couette(shear: f64, nx: usize, grid: &Grid1D) -> Self {
        let z = ModalField::zeros(nx, grid);
        let u = ModalField::from_fn(nx, grid, |_, y| shear * y).named("u_e0", EpsPower(0));
        Self {
            level: EpsPower(0),
            shear,
            u,
            v: z.clone(),
            p: z.clone(),
            forcing: EulerForcing { level: 0, f: z.clone(), g: z },
            phi: vec![0.0; grid.len()],
            harmonic: HarmonicData::zeros(nx),
            mean_line: (0.0, shear),
        }
    }

    pub fn nx(&self) -> usize {
        self.harmonic.nx
    }

    /// Wall values of the first `count` y-derivatives of `u` and `v`, in closed form.
    pub fn wall_taylor(&self, top: bool, count: usize) -> WallTaylor {
        let y = if top { 1.0 } else { 0.0 };
        let (b, s) = self.mean_line;
        let mut wu = Vec::with_capacity(count);
        let mut wv = Vec::with_capacity(count);
        for m in 0..count {
            let (mut u, v) = self.harmonic.derivative_trace(m, y);
            let mean = match m {
                0 => b + s * y,
                1 => s,
                _ => 0.0,
            };
            u.iter_mut().for_each(|c| *c += mean);
            wu.push(u);
            wv.push(v);
        }
        WallTaylor { level: self.level.0, u: wu, v: wv }
    }

    /// `m`-th y-derivatives of `(u, v)` on the term's grid, in closed form.
    pub fn derivative_fields(&self, m: usize) -> (StripField, StripField) {
        let grid = self.u.grid();
        let (mut u, v) = self.harmonic.fields(grid, m);
        let (b, s) = self.mean_line;
        for (c, y) in u.mode_values_mut(0).iter_mut().zip(grid.nodes()) {
            c.re = match m {
                0 => b + s * y,
                1 => s,
                _ => 0.0,
            };
        }
        (u, v)
    }

    /// Adds the linear-in-`y` mean shear `phi` with `phi(1) = top`, `phi(0) = bottom`,
    /// after removing any x-independent part of the Laplacian of `u`.
    pub fn correct_with_phi(&mut self, top: f64, bottom: f64) -> Result<()> {
        let phi = phi_profile(&self.u, top, bottom)?;
        for (c, p) in self.u.mode_values_mut(0).iter_mut().zip(&phi) {
            c.re += p;
        }
        for (a, p) in self.phi.iter_mut().zip(&phi) {
            *a += p;
        }
        self.mean_line.0 += bottom;
        self.mean_line.1 += top - bottom;
        Ok(())
    }

    /// `(max |x-residual|, max |y-residual|)` of the linearized outer momentum balance.
    pub fn momentum_residual(&self) -> (f64, f64) {
        momentum_residual(self.shear, &self.u, &self.v, &self.p, &self.forcing)
    }
}

/// `phi` with `phi'' = -mean(lap u)` and the given end values. Fails if the
/// Laplacian of `u` has an x-dependent part.
pub fn phi_profile(u: &StripField, top: f64, bottom: f64) -> Result<Vec<f64>> {
    let lap = u.ddx2().add(&u.dds_high(2), 1.0)?;
    let osc = (1..lap.mode_count())
        .flat_map(|n| lap.mode_values(n).iter().map(|c| c.norm()))
        .fold(0.0f64, f64::max);
    if osc > COMPAT_TOL * (1.0 + u.max_abs()) {
        return Err(EulerError::LaplacianNotShear { defect: osc });
    }
    let h = u.grid().spacing();
    let rhs: Vec<f64> = lap.mean_profile().iter().map(|v| -v).collect();
    let twice = fd::cumint_high(&fd::cumint_high(&rhs, h), h);
    let ys = u.grid().nodes();
    let end = twice[twice.len() - 1];
    Ok(twice.iter().zip(ys).map(|(q, y)| q + bottom + (top - bottom - end) * y).collect())
}

/// Pressure of the linearized outer balance
/// `A y u_x + A v + p_x = f`, `A y v_x + p_y = g`, gauged to `p(0, 1) = 0`.
pub fn pressure_from_field(shear: f64, u: &StripField, v: &StripField, forcing: &EulerForcing) -> Result<StripField> {
    let (f, g) = (&forcing.f, &forcing.g);
    let scale = 1.0 + f.max_abs() + shear * v.max_abs();
    let mean = f.mean_profile().iter().zip(v.mean_profile()).fold(0.0f64, |m, (a, b)| m.max((a - shear * b).abs()));
    if mean > COMPAT_TOL * scale {
        return Err(EulerError::NonZeroMean { what: "x-momentum forcing", value: mean });
    }
    let grid = u.grid();
    let ys = grid.nodes();
    let mut p = ModalField::zeros(u.nx(), grid).named(format!("p_e{}", forcing.level), EpsPower(forcing.level));
    for n in 1..u.nx() / 2 {
        let inv = Complex64::new(0.0, -1.0 / n as f64);
        let (fn_, vn, un) = (f.mode_values(n), v.mode_values(n), u.mode_values(n));
        let pn: Vec<Complex64> = (0..ys.len()).map(|k| (fn_[k] - vn[k] * shear) * inv - un[k] * (shear * ys[k])).collect();
        p.mode_values_mut(n).copy_from_slice(&pn);
    }
    let g0: Vec<f64> = g.mean_profile();
    let p0 = fd::cumint_high(&g0, grid.spacing());
    for (c, q) in p.mode_values_mut(0).iter_mut().zip(&p0) {
        *c = Complex64::new(*q, 0.0);
    }
    let top = grid.len() - 1;
    let gauge = p.eval_node(0.0, top);
    p.mode_values_mut(0).iter_mut().for_each(|c| c.re -= gauge);
    Ok(p)
}

pub fn momentum_residual(shear: f64, u: &StripField, v: &StripField, p: &StripField, forcing: &EulerForcing) -> (f64, f64) {
    let ys = u.grid().nodes().to_vec();
    let y_times = |q: &StripField| {
        let mut out = q.clone();
        for n in 0..out.mode_count() {
            for (c, y) in out.mode_values_mut(n).iter_mut().zip(&ys) {
                *c *= shear * y;
            }
        }
        out
    };
    let rx = y_times(&u.ddx())
        .add(&v.scale(shear), 1.0)
        .and_then(|r| r.add(&p.ddx(), 1.0))
        .and_then(|r| r.add(&forcing.f, -1.0));
    let ry = y_times(&v.ddx()).add(&p.dds_high(1), 1.0).and_then(|r| r.add(&forcing.g, -1.0));
    match (rx, ry) {
        (Ok(a), Ok(b)) => (a.max_abs(), b.max_abs()),
        _ => (f64::INFINITY, f64::INFINITY),
    }
}

/// Solves one outer level from its normal-velocity wall data and the lower outer terms.
pub fn solve_euler_level(
    level: i32,
    shear: f64,
    grid: &Grid1D,
    top: &[f64],
    bottom: &[f64],
    lower: &[EulerTerm],
) -> Result<EulerTerm> {
    let nx = top.len();
    let forcing = euler_forcing(level, nx, grid, lower)?;
    let harmonic = harmonic_data(top, bottom)?;
    let (u, v) = harmonic.fields(grid, 0);
    let u = u.named(format!("u_e{level}"), EpsPower(level));
    let v = v.named(format!("v_e{level}"), EpsPower(level));
    let p = pressure_from_field(shear, &u, &v, &forcing)?;
    Ok(EulerTerm { level: EpsPower(level), shear, u, v, p, forcing, phi: vec![0.0; grid.len()], harmonic, mean_line: (0.0, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn couette_taylor_data() {
        let g = Grid1D::interval(64).unwrap();
        let c = EulerTerm::couette(1.5, 8, &g);
        let t = c.wall_taylor(true, 3);
        assert!(t.u[0].iter().all(|v| (v - 1.5).abs() < 1e-13));
        assert!(t.u[1].iter().all(|v| (v - 1.5).abs() < 1e-10));
        assert!(t.u[2].iter().all(|v| v.abs() < 1e-8));
        let b = c.wall_taylor(false, 2);
        assert!(b.u[0].iter().all(|v| v.abs() < 1e-14));
        assert!(b.u[1].iter().all(|v| (v - 1.5).abs() < 1e-10));
    }

    #[test]
    fn closed_form_taylor_matches_differences() {
        let g = Grid1D::interval(400).unwrap();
        let nx = 8;
        let xs: Vec<f64> = (0..nx).map(|i| 2.0 * std::f64::consts::PI * i as f64 / nx as f64).collect();
        let top: Vec<f64> = xs.iter().map(|x| x.cos() + 0.3 * (2.0 * x).sin()).collect();
        let bot: Vec<f64> = xs.iter().map(|x| -0.5 * x.sin()).collect();
        let mut t = solve_euler_level(3, 1.0, &g, &top, &bot, &[]).unwrap();
        t.correct_with_phi(0.2, 0.1).unwrap();
        for wall in [true, false] {
            let w = t.wall_taylor(wall, 3);
            for m in 0..3 {
                let du = t.u.trace_derivative(m, !wall);
                let dv = t.v.trace_derivative(m, !wall);
                let eu = w.u[m].iter().zip(&du).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
                let ev = w.v[m].iter().zip(&dv).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
                assert!(eu < 1e-6 && ev < 1e-6, "{wall} {m}: {eu} {ev}");
            }
        }
        let (u1, v1) = t.derivative_fields(1);
        assert!(u1.add(&t.u.dds_high(1), -1.0).unwrap().max_abs() < 1e-8);
        assert!(v1.add(&t.v.dds_high(1), -1.0).unwrap().max_abs() < 1e-8);
    }

    #[test]
    fn phi_is_linear_for_harmonic_partner() {
        let g = Grid1D::interval(128).unwrap();
        let u = ModalField::from_fn(8, &g, |x, y| x.sin() * y.cosh());
        let phi = phi_profile(&u, 0.3, -0.1).unwrap();
        for (p, y) in phi.iter().zip(g.nodes()) {
            assert!((p - (-0.1 + 0.4 * y)).abs() < 1e-12);
        }
        let bad = ModalField::from_fn(8, &g, |x, y| x.sin() * y * y);
        assert!(matches!(phi_profile(&bad, 0.0, 0.0), Err(EulerError::LaplacianNotShear { .. })));
    }
}
