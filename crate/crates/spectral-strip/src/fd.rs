//! Finite differences and trapezoid quadrature on uniform grids.

use std::ops::{Add, Mul, Sub};

/// Values that can be differenced: `f64` and `Complex64`.
pub trait Val: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl<T> Val for T where T: Copy + Default + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// First derivative, centered inside and second-order one-sided at the ends.
pub fn d1<T: Val>(f: &[T], h: f64) -> Vec<T> {
    let n = f.len();
    let mut out = vec![T::default(); n];
    if n < 3 {
        return out;
    }
    let c = 0.5 / h;
    for k in 1..n - 1 {
        out[k] = (f[k + 1] - f[k - 1]) * c;
    }
    out[0] = (f[1] * 4.0 - f[0] * 3.0 - f[2]) * c;
    out[n - 1] = (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * c;
    out
}

/// Second derivative, centered inside and second-order one-sided at the ends.
pub fn d2<T: Val>(f: &[T], h: f64) -> Vec<T> {
    let n = f.len();
    let mut out = vec![T::default(); n];
    if n < 4 {
        return out;
    }
    let c = 1.0 / (h * h);
    for k in 1..n - 1 {
        out[k] = (f[k + 1] - f[k] * 2.0 + f[k - 1]) * c;
    }
    out[0] = (f[0] * 2.0 - f[1] * 5.0 + f[2] * 4.0 - f[3]) * c;
    out[n - 1] = (f[n - 1] * 2.0 - f[n - 2] * 5.0 + f[n - 3] * 4.0 - f[n - 4]) * c;
    out
}

/// Derivative of order `m` (1 or 2) with sixth-order stencils: centered seven
/// points inside, one-sided windows near the ends.
pub fn dm_high<T: Val>(f: &[T], h: f64, m: usize) -> Vec<T> {
    const R: usize = 3;
    let n = f.len();
    let w = if m == 1 { 2 * R + 1 } else { 2 * R + 2 };
    let mut out = vec![T::default(); n];
    if n < w + 1 {
        return if m == 1 { d1(f, h) } else { d2(f, h) };
    }
    let offsets: Vec<f64> = (0..=2 * R).map(|j| j as f64 - R as f64).collect();
    let centered = fornberg_weights(0.0, &offsets, m).swap_remove(m);
    let scale = h.powi(m as i32);
    let apply = |start: usize, weights: &[f64]| {
        let mut acc = T::default();
        for (j, c) in weights.iter().enumerate() {
            acc = acc + f[start + j] * (*c / scale);
        }
        acc
    };
    for k in 0..n {
        out[k] = if k >= R && k + R < n {
            apply(k - R, &centered)
        } else {
            let start = if k < R { 0 } else { n - w };
            let xs: Vec<f64> = (0..w).map(|j| (start + j) as f64 - k as f64).collect();
            apply(start, &fornberg_weights(0.0, &xs, m)[m])
        };
    }
    out
}

/// Cumulative integral from the first node with fourth-order cubic panels.
pub fn cumint_high<T: Val>(f: &[T], h: f64) -> Vec<T> {
    let n = f.len();
    let mut out = vec![T::default(); n];
    if n < 4 {
        return cumtrapz(f, h);
    }
    let c = h / 24.0;
    for k in 0..n - 1 {
        let panel = if k == 0 {
            (f[0] * 9.0 + f[1] * 19.0 - f[2] * 5.0 + f[3]) * c
        } else if k == n - 2 {
            (f[n - 1] * 9.0 + f[n - 2] * 19.0 - f[n - 3] * 5.0 + f[n - 4]) * c
        } else {
            (f[k] * 13.0 + f[k + 1] * 13.0 - f[k - 1] - f[k + 2]) * c
        };
        out[k + 1] = out[k] + panel;
    }
    out
}

/// Trapezoid integral over the whole grid.
pub fn trapz<T: Val>(f: &[T], h: f64) -> T {
    let n = f.len();
    if n < 2 {
        return T::default();
    }
    let mut s = (f[0] + f[n - 1]) * 0.5;
    for v in &f[1..n - 1] {
        s = s + *v;
    }
    s * h
}

/// Cumulative trapezoid from the first node: `out[k] = int_{s_0}^{s_k} f`.
pub fn cumtrapz<T: Val>(f: &[T], h: f64) -> Vec<T> {
    let mut out = vec![T::default(); f.len()];
    for k in 1..f.len() {
        out[k] = out[k - 1] + (f[k] + f[k - 1]) * (0.5 * h);
    }
    out
}

/// Cumulative trapezoid from the last node: `out[k] = int_{s_k}^{s_end} f`.
pub fn cumtrapz_rev<T: Val>(f: &[T], h: f64) -> Vec<T> {
    let n = f.len();
    let mut out = vec![T::default(); n];
    for k in (0..n.saturating_sub(1)).rev() {
        out[k] = out[k + 1] + (f[k] + f[k + 1]) * (0.5 * h);
    }
    out
}

/// Finite-difference weights for derivatives `0..=m` at `z` from nodes `x`
/// (Fornberg's recursion). Returns `w[d][j]`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Derivative of order `m` at the first (`at_start`) or last node using a
/// one-sided stencil of `m + 4` points (formal order 4).
pub fn one_sided_derivative<T: Val>(f: &[T], h: f64, m: usize, at_start: bool) -> T {
    if m == 0 {
        return if at_start { f[0] } else { f[f.len() - 1] };
    }
    let p = (m + 4).min(f.len());
    let xs: Vec<f64> = (0..p).map(|j| j as f64 * h).collect();
    let w = fornberg_weights(0.0, &xs, m);
    let sign = if at_start || m % 2 == 0 { 1.0 } else { -1.0 };
    let mut s = T::default();
    for j in 0..p {
        let v = if at_start { f[j] } else { f[f.len() - 1 - j] };
        s = s + v * (w[m][j] * sign);
    }
    s
}

/// Trapezoid integral of `s^weight * f(s)` on the given nodes.
pub fn weighted_trapz(f: &[f64], nodes: &[f64], weight: f64) -> f64 {
    let h = nodes[1] - nodes[0];
    let g: Vec<f64> = f
        .iter()
        .zip(nodes)
        .map(|(v, s)| if weight == 0.0 { *v } else if *s == 0.0 { 0.0 } else { v * s.abs().powf(weight) })
        .collect();
    trapz(&g, h)
}
