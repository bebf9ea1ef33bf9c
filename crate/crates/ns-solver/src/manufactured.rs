//! Manufactured state `psi = sin x sin^2(pi y)`, `(u, v) = (psi_y, -psi_x)`,
//! `p = cos x cos(pi y)`.

use std::f64::consts::PI;

use spectral_strip::{Grid1D, Samples, StripField};

use crate::state::NSState;

pub fn psi(x: f64, y: f64) -> f64 {
    x.sin() * (PI * y).sin().powi(2)
}

pub fn u(x: f64, y: f64) -> f64 {
    PI * x.sin() * (2.0 * PI * y).sin()
}

pub fn v(x: f64, y: f64) -> f64 {
    -x.cos() * (PI * y).sin().powi(2)
}

pub fn p(x: f64, y: f64) -> f64 {
    x.cos() * (PI * y).cos()
}

/// Right-hand sides `(f_u, g_v)` reproducing the state; `convection` adds
/// `(u.grad) u`.
pub fn forcing(eps: f64, convection: bool, x: f64, y: f64) -> (f64, f64) {
    let (s, c) = (x.sin(), x.cos());
    let s1 = (PI * y).sin();
    let c1 = (PI * y).cos();
    let (s2, c2) = ((2.0 * PI * y).sin(), (2.0 * PI * y).cos());
    let lap_u = -PI * (1.0 + 4.0 * PI * PI) * s * s2;
    let lap_v = c * (s1 * s1 - 2.0 * PI * PI * c2);
    let mut f = -eps * eps * lap_u - s * c1;
    let mut g = -eps * eps * lap_v - PI * c * s1;
    if convection {
        let (uu, vv) = (u(x, y), v(x, y));
        let (ux, uy) = (PI * c * s2, 2.0 * PI * PI * s * c2);
        let (vx, vy) = (s * s1 * s1, -PI * c * s2);
        f += uu * ux + vv * uy;
        g += uu * vx + vv * vy;
    }
    (f, g)
}

pub fn forcing_fields(eps: f64, convection: bool, nx: usize, grid: &Grid1D) -> (StripField, StripField) {
    (
        StripField::from_fn(nx, grid, |x, y| forcing(eps, convection, x, y).0),
        StripField::from_fn(nx, grid, |x, y| forcing(eps, convection, x, y).1),
    )
}

/// Max-norm errors of a computed state. The pressure is compared at half nodes
/// after applying the solver's pin `p(0, 1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedError {
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

pub fn errors(state: &NSState) -> ManufacturedError {
    let grid = state.grid();
    let nx = state.nx();
    let eu = state.u.add(&StripField::from_fn(nx, grid, u), -1.0).expect("same grid").max_abs();
    let ev = state.v.add(&StripField::from_fn(nx, grid, v), -1.0).expect("same grid").max_abs();
    let h = grid.spacing();
    let pin = p(0.0, 1.0);
    let mut exact = Samples::zeros(nx, state.p_half.ns);
    for k in 0..exact.ns {
        for i in 0..nx {
            let x = 2.0 * PI * i as f64 / nx as f64;
            exact.row_mut(k)[i] = p(x, (k as f64 + 0.5) * h) - pin;
        }
    }
    let ep = state.p_half.zip_with(&exact, |a, b| a - b).max_abs();
    ManufacturedError { u: eu, v: ev, p: ep }
}
