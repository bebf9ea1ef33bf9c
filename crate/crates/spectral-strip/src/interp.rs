//! Cubic Lagrange interpolation on uniform grids.

use crate::fd::Val;

/// Value at `s` from samples `f` on nodes `s0 + k h`; `None` outside the grid.
pub fn cubic_at<T: Val>(f: &[T], s0: f64, h: f64, s: f64) -> Option<T> {
    let n = f.len();
    let t = (s - s0) / h;
    let tol = 1e-9;
    if t < -tol || t > (n - 1) as f64 + tol || n < 4 {
        return None;
    }
    let j = (t.floor() as i64).clamp(1, n as i64 - 3) as usize;
    let r = t - j as f64;
    // Nodes at offsets -1, 0, 1, 2 relative to j.
    let w = [
        -r * (r - 1.0) * (r - 2.0) / 6.0,
        (r + 1.0) * (r - 1.0) * (r - 2.0) / 2.0,
        -(r + 1.0) * r * (r - 2.0) / 2.0,
        (r + 1.0) * r * (r - 1.0) / 6.0,
    ];
    Some(f[j - 1] * w[0] + f[j] * w[1] + f[j + 1] * w[2] + f[j + 2] * w[3])
}

/// Linear interpolation at `s` in a strictly increasing table `(xs, ys)`,
/// clamped to the end values.
pub fn linear_monotone(xs: &[f64], ys: &[f64], s: f64) -> f64 {
    let n = xs.len();
    if s <= xs[0] {
        return ys[0];
    }
    if s >= xs[n - 1] {
        return ys[n - 1];
    }
    let j = match xs.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
        Ok(j) => return ys[j],
        Err(j) => j,
    };
    let t = (s - xs[j - 1]) / (xs[j] - xs[j - 1]);
    ys[j - 1] + t * (ys[j] - ys[j - 1])
}

/// Cubic Lagrange interpolation in a strictly increasing, possibly non-uniform
/// table, clamped to the end values.
pub fn cubic_monotone(xs: &[f64], ys: &[f64], s: f64) -> f64 {
    let n = xs.len();
    if n < 4 {
        return linear_monotone(xs, ys, s);
    }
    if s <= xs[0] {
        return ys[0];
    }
    if s >= xs[n - 1] {
        return ys[n - 1];
    }
    let j = match xs.binary_search_by(|v| v.partial_cmp(&s).unwrap()) {
        Ok(j) => return ys[j],
        Err(j) => j,
    };
    let lo = (j as i64 - 2).clamp(0, n as i64 - 4) as usize;
    let mut acc = 0.0;
    for a in lo..lo + 4 {
        let mut w = 1.0;
        for b in lo..lo + 4 {
            if a != b {
                w *= (s - xs[b]) / (xs[a] - xs[b]);
            }
        }
        acc += w * ys[a];
    }
    acc
}
