//! Per-mode two-point problems `w'' - n^2 w = rhs` with Dirichlet data.

use num_complex::Complex64;

use crate::error::{Result, StripError};
use crate::field::ModeProfile;
use crate::grid::Grid1D;

/// Thomas algorithm for `a[k] w[k-1] + b[k] w[k] + c[k] w[k+1] = d[k]`.
pub fn solve_tridiagonal(a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = b.len();
    let mut cp = vec![Complex64::new(0.0, 0.0); n];
    let mut dp = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = b[0];
    if denom.norm() == 0.0 {
        return Err(StripError::Singular { block: 0 });
    }
    cp[0] = c[0] / denom;
    dp[0] = d[0] / denom;
    for k in 1..n {
        denom = b[k] - a[k] * cp[k - 1];
        if denom.norm() == 0.0 {
            return Err(StripError::Singular { block: k });
        }
        cp[k] = if k + 1 < n { c[k] / denom } else { Complex64::new(0.0, 0.0) };
        dp[k] = (d[k] - a[k] * dp[k - 1]) / denom;
    }
    let mut w = dp;
    for k in (0..n - 1).rev() {
        let next = w[k + 1];
        w[k] -= cp[k] * next;
    }
    Ok(w)
}

/// Solves `w'' - n^2 w = rhs` on `[0,1]` with `w(0) = bottom`, `w(1) = top`
/// (second-order centered differences).
pub fn solve_mode_helmholtz(n: i64, rhs: &ModeProfile, grid: &Grid1D, bottom: Complex64, top: Complex64) -> Result<ModeProfile> {
    let len = grid.len();
    if rhs.values.len() != len {
        return Err(StripError::GridMismatch("rhs length".into()));
    }
    let h2 = grid.spacing().powi(2);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut a = vec![one / h2; len];
    let mut b = vec![Complex64::new(-2.0 / h2 - (n * n) as f64, 0.0); len];
    let mut c = vec![one / h2; len];
    let mut d = rhs.values.clone();
    a[0] = zero;
    b[0] = one;
    c[0] = zero;
    d[0] = bottom;
    a[len - 1] = zero;
    b[len - 1] = one;
    c[len - 1] = zero;
    d[len - 1] = top;
    Ok(ModeProfile { n, values: solve_tridiagonal(&a, &b, &c, &d)? })
}
