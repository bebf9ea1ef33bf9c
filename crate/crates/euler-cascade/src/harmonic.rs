use spectral_strip::{Complex64, Grid1D, ModalField, StripField};

use crate::error::{EulerError, Result};

/// Traces with relative x-mean below this are treated as mean-free.
pub const MEAN_TOL: f64 = 1e-10;

fn mean_and_scale(trace: &[f64]) -> (f64, f64) {
    let m = trace.iter().sum::<f64>() / trace.len() as f64;
    let s = trace.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    (m, s)
}

/// Harmonic `v` on the strip with `v(x,1) = top`, `v(x,0) = bottom`.
///
/// Each mode solves `v'' - n^2 v = 0` exactly:
/// `v_n = [T_n sinh(n y) + B_n sinh(n (1-y))] / sinh(n)`.
pub fn solve_harmonic_dirichlet(grid: &Grid1D, top: &[f64], bottom: &[f64]) -> Result<StripField> {
    Ok(harmonic_pair(grid, top, bottom)?.1)
}

/// Wall data of a harmonic pair: half-spectra of the traces `v(x,1)`, `v(x,0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicData {
    pub nx: usize,
    pub top: Vec<Complex64>,
    pub bottom: Vec<Complex64>,
}

impl HarmonicData {
    pub fn zeros(nx: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); nx / 2 + 1];
        Self { nx, top: z.clone(), bottom: z }
    }

    /// `m`-th y-derivative of `(u_n, v_n)` at height `y`, mode `n >= 1`.
    pub fn mode_derivative(&self, n: usize, m: usize, y: f64) -> (Complex64, Complex64) {
        if n == 0 || n >= self.nx / 2 {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        let k = n as f64;
        let sk = k.sinh();
        // d^m sinh(k y) = k^m sinh or cosh; d^m sinh(k (1-y)) picks up (-1)^m
        let s = |m: usize, z: f64| if m % 2 == 0 { z.sinh() } else { z.cosh() };
        let sign = |m: usize| if m % 2 == 0 { 1.0 } else { -1.0 };
        let (t, b) = (self.top[n], self.bottom[n]);
        let v = (t * s(m, k * y) + b * (sign(m) * s(m, k * (1.0 - y)))) * (k.powi(m as i32) / sk);
        let dv = (t * s(m + 1, k * y) + b * (sign(m + 1) * s(m + 1, k * (1.0 - y)))) * (k.powi(m as i32 + 1) / sk);
        (Complex64::new(0.0, 1.0 / k) * dv, v)
    }

    /// Physical samples of `d^m u / dy^m` and `d^m v / dy^m` at height `y`.
    pub fn derivative_trace(&self, m: usize, y: f64) -> (Vec<f64>, Vec<f64>) {
        let (mut hu, mut hv) = (vec![Complex64::new(0.0, 0.0); self.nx / 2 + 1], vec![Complex64::new(0.0, 0.0); self.nx / 2 + 1]);
        for n in 1..self.nx / 2 {
            let (a, b) = self.mode_derivative(n, m, y);
            hu[n] = a;
            hv[n] = b;
        }
        (spectral_strip::fourier::inverse_half(&hu, self.nx), spectral_strip::fourier::inverse_half(&hv, self.nx))
    }

    /// Samples of the pair (and its y-derivatives of order `m`) on a grid.
    pub fn fields(&self, grid: &Grid1D, m: usize) -> (StripField, StripField) {
        let mut u = ModalField::zeros(self.nx, grid);
        let mut v = ModalField::zeros(self.nx, grid);
        for n in 1..self.nx / 2 {
            for (j, &y) in grid.nodes().iter().enumerate() {
                let (a, b) = self.mode_derivative(n, m, y);
                u.mode_values_mut(n)[j] = a;
                v.mode_values_mut(n)[j] = b;
            }
        }
        (u, v)
    }
}

/// Checks the traces and returns their half-spectra.
pub fn harmonic_data(top: &[f64], bottom: &[f64]) -> Result<HarmonicData> {
    let nx = top.len();
    for (what, t) in [("top trace", top), ("bottom trace", bottom)] {
        let (m, s) = mean_and_scale(t);
        if m.abs() > MEAN_TOL * (1.0 + s) {
            return Err(EulerError::NonZeroMean { what, value: m });
        }
    }
    Ok(HarmonicData {
        nx,
        top: spectral_strip::fourier::forward_half(top),
        bottom: spectral_strip::fourier::forward_half(bottom),
    })
}

/// Harmonic `v` with the given wall traces together with its mean-free
/// continuity partner `u = i v_n' / n`, both evaluated in closed form.
pub fn harmonic_pair(grid: &Grid1D, top: &[f64], bottom: &[f64]) -> Result<(StripField, StripField)> {
    Ok(harmonic_data(top, bottom)?.fields(grid, 0))
}

/// `u` with `u_x + v_y = 0` and zero x-mean: `u_n = -v_n' / (i n)`.
pub fn u_from_v(v: &StripField) -> Result<StripField> {
    let dv = v.dds_high(1);
    let mean = dv.mean_profile().iter().fold(0.0f64, |a, m| a.max(m.abs()));
    if mean > MEAN_TOL * (1.0 + dv.max_abs()) {
        return Err(EulerError::NonZeroMean { what: "d/dy v", value: mean });
    }
    let mut u = ModalField::zeros(v.nx(), v.grid());
    for n in 1..v.nx() / 2 {
        let c = Complex64::new(0.0, 1.0 / n as f64);
        for (o, d) in u.mode_values_mut(n).iter_mut().zip(dv.mode_values(n)) {
            *o = d * c;
        }
    }
    Ok(u)
}

/// `max |u_x + v_y|` with the fourth-order y-derivative used by the cascade.
pub fn divergence(u: &StripField, v: &StripField) -> f64 {
    u.ddx().add(&v.dds_high(1), 1.0).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
}

/// `max |v_xx + v_yy|`.
pub fn laplacian_max(v: &StripField) -> f64 {
    v.ddx2().add(&v.dds_high(2), 1.0).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid1D {
        Grid1D::interval(256).unwrap()
    }

    fn samples(nx: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..nx).map(|i| f(2.0 * PI * i as f64 / nx as f64)).collect()
    }

    #[test]
    fn single_mode_top_data() {
        let g = grid();
        let v = solve_harmonic_dirichlet(&g, &samples(16, f64::cos), &vec![0.0; 16]).unwrap();
        assert!((v.eval_node(0.0, 128) - 0.443409).abs() < 1e-6);
        assert!(laplacian_max(&v) < 1e-8);
        let u = u_from_v(&v).unwrap();
        let want = ModalField::from_fn(16, &g, |x, y| -x.sin() * y.cosh() / 1f64.sinh());
        assert!(u.add(&want, -1.0).unwrap().max_abs() < 1e-9);
        assert!(divergence(&u, &v) < 1e-10);
    }

    #[test]
    fn two_sided_data() {
        let g = grid();
        let t = samples(16, |x| (2.0 * x).sin());
        let v = solve_harmonic_dirichlet(&g, &t, &t).unwrap();
        let want =
            ModalField::from_fn(16, &g, |x, y| (2.0 * x).sin() * ((2.0 * y).sinh() + (2.0 * (1.0 - y)).sinh()) / 2f64.sinh());
        assert!(v.add(&want, -1.0).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn zero_and_rejected_data() {
        let g = grid();
        let v = solve_harmonic_dirichlet(&g, &vec![0.0; 8], &vec![0.0; 8]).unwrap();
        assert!(v.is_zero());
        assert!(u_from_v(&v).unwrap().is_zero());
        assert!(solve_harmonic_dirichlet(&g, &vec![1.0; 8], &vec![0.0; 8]).is_err());
    }
}
