//! Mode-by-mode Stokes solve with zero wall data.

use nalgebra::DVector;
use spectral_strip::blocktri::BlockTridiagonal;
use spectral_strip::helmholtz::solve_tridiagonal;
use spectral_strip::{fourier, Complex64, GridKind, Samples, StripField};

use crate::discrete::{Layout, NsProblem, Unknowns};
use crate::error::{NsError, Result};
use crate::state::{NSState, NewtonLog};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Profiles `u_k`, `v_k` on nodes and `p_{k+1/2}` on half nodes of one Fourier mode.
struct ModeSolution {
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    p: Vec<Complex64>,
}

/// Modes without x-derivative (mean and Nyquist): `v = 0`, `-eps^2 u'' = f`,
/// `p' = g` with `p` zero at the top half node.
fn reduced_mode(eps: f64, h: f64, f: &[Complex64], g: &[Complex64]) -> Result<ModeSolution> {
    let n = f.len() - 1;
    let e = eps * eps / (h * h);
    let mut a = vec![Complex64::new(-e, 0.0); n + 1];
    let mut b = vec![Complex64::new(2.0 * e, 0.0); n + 1];
    let mut c = vec![Complex64::new(-e, 0.0); n + 1];
    let mut d = f.to_vec();
    for k in [0, n] {
        a[k] = ZERO;
        c[k] = ZERO;
        b[k] = Complex64::new(1.0, 0.0);
        d[k] = ZERO;
    }
    let u = solve_tridiagonal(&a, &b, &c, &d)?;
    let mut p = vec![ZERO; n];
    for k in (1..n).rev() {
        p[k - 1] = p[k] - g[k] * h;
    }
    Ok(ModeSolution { u, v: vec![ZERO; n + 1], p })
}

fn oscillating_mode(eps: f64, h: f64, wn: f64, f: &[Complex64], g: &[Complex64]) -> Result<ModeSolution> {
    let n = f.len() - 1;
    let e2 = eps * eps;
    let ik = Complex64::new(0.0, wn);
    let one = Complex64::new(1.0, 0.0);
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut j = BlockTridiagonal::<Complex64>::zeros(n + 1, 3);
    let mut rhs = vec![DVector::<Complex64>::zeros(3); n + 1];
    for k in 0..=n {
        if k == 0 || k == n {
            j.diag[k][(0, 0)] = one;
            j.diag[k][(1, 1)] = one;
        } else {
            let dg = c(e2 * wn * wn + 2.0 * e2 / (h * h));
            let side = c(-e2 / (h * h));
            j.diag[k][(0, 0)] = dg;
            j.diag[k][(0, 2)] = ik * 0.5;
            j.lower[k][(0, 0)] = side;
            j.upper[k][(0, 0)] = side;
            j.upper[k][(0, 2)] = ik * 0.5;
            j.diag[k][(1, 1)] = dg;
            j.diag[k][(1, 2)] = c(-1.0 / h);
            j.lower[k][(1, 1)] = side;
            j.upper[k][(1, 1)] = side;
            j.upper[k][(1, 2)] = c(1.0 / h);
            rhs[k][0] = f[k];
            rhs[k][1] = g[k];
        }
        if k > 0 {
            j.lower[k][(2, 0)] = ik * 0.5;
            j.lower[k][(2, 1)] = c(-1.0 / h);
            j.diag[k][(2, 0)] = ik * 0.5;
            j.diag[k][(2, 1)] = c(1.0 / h);
        } else {
            j.diag[k][(2, 2)] = one;
        }
    }
    let x = j.solve(&rhs)?;
    Ok(ModeSolution {
        u: x.iter().map(|b| b[0]).collect(),
        v: x.iter().map(|b| b[1]).collect(),
        p: x[1..].iter().map(|b| b[2]).collect(),
    })
}

fn to_samples(modes: &[Vec<Complex64>], nx: usize) -> Samples {
    let len = modes[0].len();
    let mut s = Samples::zeros(nx, len);
    let mut half = vec![ZERO; modes.len()];
    for k in 0..len {
        for (n, m) in modes.iter().enumerate() {
            half[n] = m[k];
        }
        s.row_mut(k).copy_from_slice(&fourier::inverse_half(&half, nx));
    }
    s
}

/// Solves `-eps^2 lap u + p_x = f_u`, `-eps^2 lap v + p_y = g_v`, `div u = 0`
/// with `u = v = 0` on both walls, one Fourier mode at a time. The pressure is
/// pinned by `p(0, 1) = 0`.
pub fn stokes_solve(eps: f64, f_u: &StripField, g_v: &StripField) -> Result<NSState> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(NsError::InvalidEpsilon(eps));
    }
    let grid = f_u.grid();
    if grid.kind() != GridKind::IntervalY || !g_v.grid().same_as(grid) || g_v.nx() != f_u.nx() {
        return Err(NsError::Mismatch("forcings must share one y-grid of [0,1]".into()));
    }
    let nx = f_u.nx();
    let ny = grid.len() - 1;
    let h = grid.spacing();
    let nyq = nx / 2;
    let mut sols = Vec::with_capacity(nyq + 1);
    for n in 0..=nyq {
        let (f, g) = (f_u.mode_values(n), g_v.mode_values(n));
        sols.push(if n == 0 || n == nyq { reduced_mode(eps, h, f, g)? } else { oscillating_mode(eps, h, n as f64, f, g)? });
    }
    let u = to_samples(&sols.iter().map(|s| s.u.clone()).collect::<Vec<_>>(), nx);
    let v = to_samples(&sols.iter().map(|s| s.v.clone()).collect::<Vec<_>>(), nx);
    let mut p_half = to_samples(&sols.iter().map(|s| s.p.clone()).collect::<Vec<_>>(), nx);
    let pin = 1.5 * p_half.at(0, ny - 1) - 0.5 * p_half.at(0, ny - 2);
    p_half.data.iter_mut().for_each(|p| *p -= pin);
    let x = Unknowns { u, v, p_half };

    let problem = NsProblem {
        eps,
        convection: false,
        bottom: vec![0.0; nx],
        top: vec![0.0; nx],
        f_u: Some(f_u.samples()),
        g_v: Some(g_v.samples()),
    };
    let layout = Layout::new(nx, ny)?;
    let r = layout.norm(&layout.residual(&problem, &x));
    let log = NewtonLog { residuals: vec![r], converged: true, ..NewtonLog::default() };
    NSState::from_unknowns(eps, x, log)
}
