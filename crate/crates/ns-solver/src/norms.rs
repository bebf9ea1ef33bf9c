//! Error norms, stream function and functional inequalities on strip states.

use std::f64::consts::PI;

use spectral_strip::{fd, Grid1D, Samples, StripField};

use crate::error::{NsError, Result};
use crate::state::{resample, NSState};

/// Weight exponents reported for the `y^kappa`-weighted error.
pub const WEIGHT_KAPPAS: [f64; 2] = [0.0, 0.5];

const WALL_TOL: f64 = 1e-12;

/// `int_T int_0^1 s dx dy` with the trapezoid rule in both directions.
pub fn integral(s: &Samples, h: f64) -> f64 {
    let dx = 2.0 * PI / s.nx as f64;
    let rows: Vec<f64> = (0..s.ns).map(|k| s.row(k).iter().sum::<f64>() * dx).collect();
    fd::trapz(&rows, h)
}

pub fn l2(s: &Samples, h: f64) -> f64 {
    integral(&s.map(|v| v * v), h).sqrt()
}

/// Joint `L^2` norm of several fields.
pub fn l2_joint(fields: &[&Samples], h: f64) -> f64 {
    fields.iter().map(|s| l2(s, h).powi(2)).sum::<f64>().sqrt()
}

fn weighted(s: &Samples, h: f64, w: impl Fn(f64) -> f64) -> Samples {
    let mut out = s.clone();
    for k in 0..s.ns {
        let c = w(k as f64 * h);
        out.row_mut(k).iter_mut().for_each(|v| *v *= c);
    }
    out
}

/// First and second derivatives of a sampled field.
struct Derivs {
    x: Samples,
    y: Samples,
    xx: Samples,
    xy: Samples,
}

fn derivs(s: &Samples, h: f64) -> Derivs {
    let x = s.ddx(1);
    Derivs { y: s.dds(h, 1), xx: s.ddx(2), xy: x.dds(h, 1), x }
}

/// Weighted pieces of the energy norm of an error pair `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNorms {
    pub sqrt_y_ux: f64,
    pub sqrt_y_vx: f64,
    /// `eps ||sqrt(y) u_y||`
    pub eps_sqrt_y_uy: f64,
    /// `eps ||d_y u_0||` with `u_0` the x-mean.
    pub eps_mean_uy: f64,
    /// `eps^2 ||(u_xx, v_xx, v_xy, u_xy)||`
    pub eps2_second: f64,
}

impl WeightedNorms {
    pub fn energy(&self) -> f64 {
        [self.sqrt_y_ux, self.sqrt_y_vx, self.eps_sqrt_y_uy, self.eps_mean_uy, self.eps2_second]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }
}

/// Energy-norm pieces of `(u, v)` on a uniform y-grid with spacing `h`.
pub fn weighted_norms(u: &Samples, v: &Samples, eps: f64, h: f64) -> WeightedNorms {
    let (du, dv) = (derivs(u, h), derivs(v, h));
    let sy = |y: f64| y.sqrt();
    let mean: Vec<f64> = (0..u.ns).map(|k| u.row(k).iter().sum::<f64>() / u.nx as f64).collect();
    let mean_y = fd::d1(&mean, h);
    let mean_norm = (2.0 * PI * fd::trapz(&mean_y.iter().map(|v| v * v).collect::<Vec<_>>(), h)).sqrt();
    WeightedNorms {
        sqrt_y_ux: l2(&weighted(&du.x, h, sy), h),
        sqrt_y_vx: l2(&weighted(&dv.x, h, sy), h),
        eps_sqrt_y_uy: eps * l2(&weighted(&du.y, h, sy), h),
        eps_mean_uy: eps * mean_norm,
        eps2_second: eps * eps * l2_joint(&[&du.xx, &dv.xx, &dv.xy, &du.xy], h),
    }
}

/// Distances of a solved state from the asymptotic prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// `||u - A y - u_p^(0)||_inf`
    pub u_leading_inf: f64,
    pub u_leading_l2: f64,
    pub v_inf: f64,
    pub v_l2: f64,
    /// `||u - u^a||_inf`, `||v - v^a||_inf` when a composite is supplied.
    pub u_composite_inf: Option<f64>,
    pub v_composite_inf: Option<f64>,
    /// Energy pieces of the error against the composite, or against the leading profile.
    pub weighted: WeightedNorms,
    pub energy: f64,
    /// `(kappa, ||y^(kappa/2) (u - target)||_2)` for each of [`WEIGHT_KAPPAS`].
    pub kappa_weighted: Vec<(f64, f64)>,
}

/// Compares `state` with `leading = A y + u_p^(0)(x, (y-1)/eps)` and an optional
/// composite `(u^a, v^a)`. Target fields on other y-grids are interpolated.
pub fn error_norms(state: &NSState, leading: &StripField, composite: Option<(&StripField, &StripField)>) -> Result<ErrorReport> {
    let grid = state.grid();
    let h = grid.spacing();
    let nx = state.nx();
    let check = |f: &StripField| {
        if f.nx() == nx {
            Ok(())
        } else {
            Err(NsError::Mismatch(format!("target has nx = {}, state has {nx}", f.nx())))
        }
    };
    check(leading)?;
    let (u, v) = (state.u.samples(), state.v.samples());
    let du_lead = u.zip_with(&resample(leading, grid), |a, b| a - b);
    let (eu, ev, u_c, v_c) = match composite {
        Some((ua, va)) => {
            check(ua)?;
            check(va)?;
            let eu = u.zip_with(&resample(ua, grid), |a, b| a - b);
            let ev = v.zip_with(&resample(va, grid), |a, b| a - b);
            let (mu, mv) = (eu.max_abs(), ev.max_abs());
            (eu, ev, Some(mu), Some(mv))
        }
        None => (du_lead.clone(), v.clone(), None, None),
    };
    let w = weighted_norms(&eu, &ev, state.eps, h);
    let kappa_weighted = WEIGHT_KAPPAS.iter().map(|&k| (k, l2(&weighted(&eu, h, |y| y.powf(0.5 * k)), h))).collect();
    Ok(ErrorReport {
        u_leading_inf: du_lead.max_abs(),
        u_leading_l2: l2(&du_lead, h),
        v_inf: v.max_abs(),
        v_l2: l2(&v, h),
        u_composite_inf: u_c,
        v_composite_inf: v_c,
        energy: w.energy(),
        weighted: w,
        kappa_weighted,
    })
}

/// Stream function `phi = -int_y^1 u` and vorticity `omega = v_x - u_y`.
pub fn stream_vorticity(state: &NSState) -> Result<(StripField, StripField)> {
    let grid = state.grid();
    let h = grid.spacing();
    let u = state.u.samples();
    let mut phi = Samples::zeros(u.nx, u.ns);
    for i in 0..u.nx {
        let col = fd::cumtrapz_rev(&u.column(i), h);
        for (k, c) in col.iter().enumerate() {
            phi.row_mut(k)[i] = -c;
        }
    }
    let omega = state.v.samples().ddx(1).zip_with(&u.dds(h, 1), |a, b| a - b);
    Ok((StripField::from_samples(&phi, grid)?, StripField::from_samples(&omega, grid)?))
}

/// `||lap phi + omega||_2` over interior nodes.
pub fn poisson_defect(phi: &StripField, omega: &StripField) -> f64 {
    let h = phi.grid().spacing();
    let lap = phi.ddx2().add(&phi.dds2(), 1.0).expect("same grid");
    let mut d = lap.add(omega, 1.0).expect("same grid").samples();
    let last = d.ns - 1;
    for k in [0, last] {
        d.row_mut(k).iter_mut().for_each(|v| *v = 0.0);
    }
    l2(&d, h)
}

fn wall_zero(s: &Samples) -> Result<()> {
    let scale = 1.0f64.max(s.max_abs());
    let wall = s.row(0).iter().chain(s.row(s.ns - 1)).fold(0.0f64, |m, v| m.max(v.abs()));
    if wall > WALL_TOL * scale {
        Err(NsError::NonZeroWall(wall))
    } else {
        Ok(())
    }
}

/// `(||(u,v)||_inf, ||(u_x,v_x)|| + ||(u_y,v_y)|| + ||(u_xy,v_xy)||)` for a pair
/// vanishing on both walls.
pub fn sobolev_embedding_check(u: &StripField, v: &StripField) -> Result<(f64, f64)> {
    let grid: &Grid1D = u.grid();
    if !v.grid().same_as(grid) || v.nx() != u.nx() {
        return Err(NsError::Mismatch("embedding check needs one grid".into()));
    }
    let h = grid.spacing();
    let (us, vs) = (u.samples(), v.samples());
    wall_zero(&us)?;
    wall_zero(&vs)?;
    let (du, dv) = (derivs(&us, h), derivs(&vs, h));
    let lhs = us.max_abs().max(vs.max_abs());
    let rhs = l2_joint(&[&du.x, &dv.x], h) + l2_joint(&[&du.y, &dv.y], h) + l2_joint(&[&du.xy, &dv.xy], h);
    Ok((lhs, rhs))
}

/// `(||(u_xx, v_xx, u_xy, v_xy)||^2, eps^-2 |int (f_u u_xx + g_v v_xx)|)` for a
/// Stokes state driven by `(f_u, g_v)`.
pub fn stokes_estimate(state: &NSState, f_u: &StripField, g_v: &StripField) -> Result<(f64, f64)> {
    let grid = state.grid();
    let h = grid.spacing();
    let (du, dv) = (derivs(&state.u.samples(), h), derivs(&state.v.samples(), h));
    let (f, g) = (resample(f_u, grid), resample(g_v, grid));
    let lhs = l2_joint(&[&du.xx, &dv.xx, &du.xy, &dv.xy], h).powi(2);
    let work = f.zip_with(&du.xx, |a, b| a * b).zip_with(&g.zip_with(&dv.xx, |a, b| a * b), |a, b| a + b);
    Ok((lhs, integral(&work, h).abs() / (state.eps * state.eps)))
}
