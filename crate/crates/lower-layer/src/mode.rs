//! Per-mode two-point problems of the lower layer on `[0, eta_max]`.
//!
//! Mode `n != 0`: `A i n eta u + A v - u'' = f`, `v' = -i n u`, with `u(0) = 0`,
//! `v(eta_max) = 0`, `u'(eta_max) = 0`. Second-order centered differences, a
//! ghost node at the far end, trapezoid continuity between nodes.

use nalgebra::{DMatrix, DVector};
use spectral_strip::blocktri::BlockTridiagonal;
use spectral_strip::Complex64;

use crate::error::{LowerError, Result};

/// Relative size of `eta^2 |f|` tolerated on the last tenth of the grid.
pub const DECAY_TOL: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `max eta^2 |f|` on the outer tenth of the grid, relative to `1 + max |f|`.
pub fn weighted_tail<T: Copy + Into<Complex64>>(f: &[T], h: f64) -> f64 {
    let n = f.len();
    let span = (n / 10).max(2);
    let scale = 1.0 + f.iter().map(|v| (*v).into().norm()).fold(0.0, f64::max);
    let tail = (n - span..n).map(|k| (k as f64 * h).powi(2) * f[k].into().norm()).fold(0.0, f64::max);
    tail / scale
}

/// Mean-flow profile `u(eta) = int_0^eta int_s^inf f` and its far value.
///
/// The inner integral is taken at half nodes and the outer one by the midpoint
/// rule; the result coincides with the centered-difference solution of
/// `-u'' = f`, `u(0) = 0`, `u'(eta_max) = 0` with a ghost node.
pub fn zero_mode_solve(f: &[f64], h: f64) -> Result<(Vec<f64>, f64)> {
    let tail = weighted_tail(f, h);
    if tail > DECAY_TOL {
        return Err(LowerError::NotDecaying { what: "mean forcing", tail });
    }
    let n = f.len();
    // flux[j] = int_{eta_{j+1/2}}^inf f
    let mut flux = vec![0.0; n - 1];
    let mut acc = 0.5 * h * f[n - 1];
    for j in (0..n - 1).rev() {
        flux[j] = acc;
        acc += h * f[j];
    }
    let mut u = vec![0.0; n];
    for k in 1..n {
        u[k] = u[k - 1] + h * flux[k - 1];
    }
    let far = u[n - 1];
    Ok((u, far))
}

/// Solves the coupled mode-`n` system; returns `(u, v)` on the grid.
pub fn nonzero_mode_solve(n: i64, f: &[Complex64], a: f64, h: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if n == 0 {
        return Err(LowerError::InvalidArgument("mode 0 has its own solver".into()));
    }
    if !(a > 0.0) {
        return Err(LowerError::InvalidArgument(format!("shear {a} must be positive")));
    }
    let tail = weighted_tail(f, h);
    if tail > DECAY_TOL {
        return Err(LowerError::NotDecaying { what: "mode forcing", tail });
    }
    let len = f.len();
    let last = len - 1;
    let ik = c(0.0, n as f64);
    let h2 = 1.0 / (h * h);
    let mut sys = BlockTridiagonal::<Complex64>::zeros(len, 2);
    let mut rhs = vec![DVector::zeros(2); len];
    for k in 0..len {
        let eta = k as f64 * h;
        // row 0: momentum (or wall condition)
        if k == 0 {
            sys.diag[0][(0, 0)] = c(1.0, 0.0);
        } else {
            sys.diag[k][(0, 0)] = ik * (a * eta) + 2.0 * h2;
            sys.diag[k][(0, 1)] = c(a, 0.0);
            let below = if k == last { -2.0 * h2 } else { -h2 };
            sys.lower[k][(0, 0)] = c(below, 0.0);
            if k < last {
                sys.upper[k][(0, 0)] = c(-h2, 0.0);
            }
            rhs[k][0] = f[k];
        }
        // row 1: continuity between k and k+1 (or far condition on v)
        if k < last {
            sys.diag[k][(1, 0)] = ik * (0.5 * h);
            sys.diag[k][(1, 1)] = c(-1.0, 0.0);
            sys.upper[k][(1, 0)] = ik * (0.5 * h);
            sys.upper[k][(1, 1)] = c(1.0, 0.0);
        } else {
            sys.diag[k][(1, 1)] = c(1.0, 0.0);
        }
    }
    let x = sys.solve(&rhs)?;
    Ok((x.iter().map(|b| b[0]).collect(), x.iter().map(|b| b[1]).collect()))
}

/// `v(eta) = int_eta^inf i n u`, trapezoid, pinned to 0 at the far node.
pub fn mode_v_from_u(n: i64, u: &[Complex64], h: f64) -> Vec<Complex64> {
    let ik = c(0.0, n as f64);
    let dx: Vec<Complex64> = u.iter().map(|v| ik * v).collect();
    spectral_strip::fd::cumtrapz_rev(&dx, h)
}

/// Applies the discrete mode-`n` operator `A i n eta u + A v(u) - u''` with the
/// far ghost node; row 0 is left zero.
pub fn apply_mode(n: i64, u: &[Complex64], a: f64, h: f64) -> Vec<Complex64> {
    let len = u.len();
    let last = len - 1;
    let v = mode_v_from_u(n, u, h);
    let ik = c(0.0, n as f64);
    let mut out = vec![c(0.0, 0.0); len];
    for k in 1..len {
        let up = if k == last { u[k - 1] } else { u[k + 1] };
        let lap = (up - u[k] * 2.0 + u[k - 1]) / (h * h);
        out[k] = ik * u[k] * (a * k as f64 * h) + v[k] * a - lap;
    }
    out
}

/// Dense reference solve of the same discretization (small grids only).
pub fn dense_mode_solve(n: i64, f: &[Complex64], a: f64, h: f64) -> Option<Vec<Complex64>> {
    let len = f.len();
    let mut m = DMatrix::<Complex64>::zeros(len, len);
    let mut b = DVector::<Complex64>::zeros(len);
    for j in 0..len {
        let mut e = vec![c(0.0, 0.0); len];
        e[j] = c(1.0, 0.0);
        let col = apply_mode(n, &e, a, h);
        for k in 1..len {
            m[(k, j)] = col[k];
        }
    }
    m[(0, 0)] = c(1.0, 0.0);
    for k in 1..len {
        b[k] = f[k];
    }
    m.lu().solve(&b).map(|x| x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_forcing_zero_solution() {
        let (u, a) = zero_mode_solve(&vec![0.0; 101], 0.1).unwrap();
        assert!(u.iter().all(|v| *v == 0.0) && a == 0.0);
        let (u, v) = nonzero_mode_solve(2, &vec![c(0.0, 0.0); 101], 1.0, 0.1).unwrap();
        assert!(u.iter().chain(&v).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn block_and_dense_solves_agree() {
        let h = 0.25;
        let f: Vec<Complex64> = (0..161).map(|k| c(1.0, 0.5) * (-(k as f64) * h).exp()).collect();
        let (u, v) = nonzero_mode_solve(1, &f, 1.3, h).unwrap();
        let d = dense_mode_solve(1, &f, 1.3, h).unwrap();
        assert!(u.iter().zip(&d).all(|(a, b)| (a - b).norm() < 1e-12));
        let vv = mode_v_from_u(1, &u, h);
        assert!(v.iter().zip(&vv).all(|(a, b)| (a - b).norm() < 1e-12));
        let r = apply_mode(1, &u, 1.3, h);
        assert!((1..161).all(|k| (r[k] - f[k]).norm() < 1e-12));
    }

    #[test]
    fn zero_mode_matches_ghost_difference_scheme() {
        let h = 0.1;
        let f: Vec<f64> = (0..401).map(|k| (-(k as f64) * h).exp()).collect();
        let (u, _) = zero_mode_solve(&f, h).unwrap();
        let last = u.len() - 1;
        for k in 1..=last {
            let up = if k == last { u[k - 1] } else { u[k + 1] };
            let r = -(up - 2.0 * u[k] + u[k - 1]) / (h * h) - f[k];
            assert!(r.abs() < 1e-10, "{k}: {r}");
        }
    }

    #[test]
    fn fat_tail_rejected() {
        let f = vec![1.0; 101];
        assert!(matches!(zero_mode_solve(&f, 0.4), Err(LowerError::NotDecaying { .. })));
    }
}
