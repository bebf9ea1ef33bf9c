//! Discrete Fourier transform on the periodic x-grid.
//!
//! Coefficients are normalized so that `c_0` is the x-mean and
//! `f(x_j) = sum_n c_n exp(i n x_j)`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, StripError};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

fn check_len(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        Err(StripError::BadSampleCount(n))
    } else {
        Ok(())
    }
}

/// Signed wavenumber of FFT slot `k` for `n` samples (Nyquist reported as `+n/2`).
pub fn wavenumber(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Full spectrum in FFT slot order.
pub fn dft_forward(samples: &[f64]) -> Result<Vec<Complex64>> {
    let n = samples.len();
    check_len(n)?;
    let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    plan(n, true).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    Ok(buf)
}

/// Inverse of [`dft_forward`]; the imaginary part is discarded.
pub fn dft_inverse(coeffs: &[Complex64]) -> Result<Vec<f64>> {
    let n = coeffs.len();
    check_len(n)?;
    let mut buf = coeffs.to_vec();
    plan(n, false).process(&mut buf);
    Ok(buf.iter().map(|c| c.re).collect())
}

/// Modes `0..=n/2` of real samples. The Nyquist coefficient is real.
pub fn forward_half(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    plan(n, true).process(&mut buf);
    let scale = 1.0 / n as f64;
    let mut half: Vec<Complex64> = buf[..=n / 2].iter().map(|c| c * scale).collect();
    half[n / 2].im = 0.0;
    half
}

/// Real samples from modes `0..=n/2`, completing negative modes by conjugation.
pub fn inverse_half(half: &[Complex64], n: usize) -> Vec<f64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[0] = Complex64::new(half[0].re, 0.0);
    for k in 1..n / 2 {
        buf[k] = half[k];
        buf[n - k] = half[k].conj();
    }
    buf[n / 2] = Complex64::new(half[n / 2].re, 0.0);
    plan(n, false).process(&mut buf);
    buf.iter().map(|c| c.re).collect()
}

/// Spectral x-derivative of real samples (Nyquist derivative set to zero).
pub fn derivative(samples: &[f64], order: u32) -> Vec<f64> {
    let n = samples.len();
    let mut half = forward_half(samples);
    for (k, c) in half.iter_mut().enumerate() {
        if k == n / 2 {
            if order % 2 == 1 {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c *= (-(k as f64).powi(2)).powi(order as i32 / 2);
            }
            continue;
        }
        *c *= Complex64::new(0.0, k as f64).powu(order);
    }
    inverse_half(&half, n)
}

/// Periodic x-antiderivative with zero mean; the mean of the input must vanish.
pub fn antiderivative(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mut half = forward_half(samples);
    half[0] = Complex64::new(0.0, 0.0);
    half[n / 2] = Complex64::new(0.0, 0.0);
    for (k, c) in half.iter_mut().enumerate().skip(1) {
        *c /= Complex64::new(0.0, k as f64);
    }
    inverse_half(&half, n)
}

/// Dense first-derivative matrix acting on physical samples (row-major, `n*n`).
///
/// Equivalent to [`derivative`] with order 1.
pub fn diff_matrix(n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let k = i as f64 - j as f64;
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                d[i * n + j] = 0.5 * sign / (0.5 * k * h).tan();
            }
        }
    }
    d
}

/// Trapezoid (exact for resolved trigonometric polynomials) integral over one period.
pub fn quad_x(samples: &[f64]) -> f64 {
    2.0 * PI * samples.iter().sum::<f64>() / samples.len() as f64
}

pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}
