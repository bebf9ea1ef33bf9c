//! Real fields on `T x grid`, stored as Fourier-mode profiles.

use num_complex::Complex64;

use crate::error::{Result, StripError};
use crate::fd;
use crate::fourier;
use crate::grid::Grid1D;
use crate::power::EpsPower;

/// Profile of Fourier mode `n` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    pub n: i64,
    pub values: Vec<Complex64>,
}

impl ModeProfile {
    pub fn zeros(n: i64, len: usize) -> Self {
        Self { n, values: vec![Complex64::new(0.0, 0.0); len] }
    }

    /// Profile of mode `-n` of the same real field.
    pub fn conj_pair(&self) -> Self {
        Self { n: -self.n, values: self.values.iter().map(|v| v.conj()).collect() }
    }
}

/// Physical samples on `x-grid x s-grid`; index `k * nx + i` is node `(x_i, s_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub nx: usize,
    pub ns: usize,
    pub data: Vec<f64>,
}

impl Samples {
    pub fn zeros(nx: usize, ns: usize) -> Self {
        Self { nx, ns, data: vec![0.0; nx * ns] }
    }

    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.data[k * self.nx + i]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.nx..(k + 1) * self.nx]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.data[k * self.nx..(k + 1) * self.nx]
    }

    /// Values at fixed `x_i` along the s-grid.
    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.ns).map(|k| self.at(i, k)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn zip_with(&self, other: &Samples, f: impl Fn(f64, f64) -> f64) -> Samples {
        debug_assert_eq!(self.data.len(), other.data.len());
        Samples { nx: self.nx, ns: self.ns, data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Samples {
        Samples { nx: self.nx, ns: self.ns, data: self.data.iter().map(|v| f(*v)).collect() }
    }

    pub fn add_assign(&mut self, other: &Samples, scale: f64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    /// Spectral x-derivative of each row.
    pub fn ddx(&self, order: u32) -> Samples {
        let mut out = Samples::zeros(self.nx, self.ns);
        for k in 0..self.ns {
            let d = fourier::derivative(self.row(k), order);
            out.row_mut(k).copy_from_slice(&d);
        }
        out
    }

    /// Finite-difference derivative along s with spacing `h`.
    pub fn dds(&self, h: f64, order: u32) -> Samples {
        let mut out = Samples::zeros(self.nx, self.ns);
        for i in 0..self.nx {
            let col = self.column(i);
            let d = if order == 1 { fd::d1(&col, h) } else { fd::d2(&col, h) };
            for k in 0..self.ns {
                out.data[k * self.nx + i] = d[k];
            }
        }
        out
    }
}

/// Real field stored as modes `0..=nx/2` on a profile grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalField {
    nx: usize,
    grid: Grid1D,
    modes: Vec<Vec<Complex64>>,
    pub name: String,
    pub exponent: EpsPower,
}

/// Field on the interval `y in [0,1]`.
pub type StripField = ModalField;

impl ModalField {
    pub fn zeros(nx: usize, grid: &Grid1D) -> Self {
        Self {
            nx,
            grid: grid.clone(),
            modes: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; nx / 2 + 1],
            name: String::new(),
            exponent: EpsPower::ZERO,
        }
    }

    pub fn named(mut self, name: impl Into<String>, exponent: EpsPower) -> Self {
        self.name = name.into();
        self.exponent = exponent;
        self
    }

    pub fn from_samples(s: &Samples, grid: &Grid1D) -> Result<Self> {
        if s.ns != grid.len() {
            return Err(StripError::GridMismatch(format!("{} rows vs {} nodes", s.ns, grid.len())));
        }
        if s.nx < 4 || s.nx % 2 != 0 {
            return Err(StripError::BadSampleCount(s.nx));
        }
        let mut f = Self::zeros(s.nx, grid);
        for k in 0..s.ns {
            let half = fourier::forward_half(s.row(k));
            for (n, c) in half.into_iter().enumerate() {
                f.modes[n][k] = c;
            }
        }
        Ok(f)
    }

    /// Samples `g(x, s)` on the grids.
    pub fn from_fn(nx: usize, grid: &Grid1D, g: impl Fn(f64, f64) -> f64) -> Self {
        let xg = Grid1D::periodic(nx).expect("even nx");
        let mut s = Samples::zeros(nx, grid.len());
        for (k, &sv) in grid.nodes().iter().enumerate() {
            for (i, &x) in xg.nodes().iter().enumerate() {
                s.data[k * nx + i] = g(x, sv);
            }
        }
        Self::from_samples(&s, grid).expect("consistent sizes")
    }

    pub fn samples(&self) -> Samples {
        let ns = self.grid.len();
        let mut s = Samples::zeros(self.nx, ns);
        let mut half = vec![Complex64::new(0.0, 0.0); self.nx / 2 + 1];
        for k in 0..ns {
            for n in 0..half.len() {
                half[n] = self.modes[n][k];
            }
            let row = fourier::inverse_half(&half, self.nx);
            s.row_mut(k).copy_from_slice(&row);
        }
        s
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Profile of signed mode `n`; negative modes follow from reality.
    pub fn mode(&self, n: i64) -> ModeProfile {
        let k = n.unsigned_abs() as usize;
        if k >= self.modes.len() {
            return ModeProfile::zeros(n, self.grid.len());
        }
        let p = ModeProfile { n: k as i64, values: self.modes[k].clone() };
        if n < 0 {
            p.conj_pair()
        } else {
            p
        }
    }

    pub fn mode_values(&self, n: usize) -> &[Complex64] {
        &self.modes[n]
    }

    pub fn mode_values_mut(&mut self, n: usize) -> &mut [Complex64] {
        &mut self.modes[n]
    }

    pub fn set_mode(&mut self, p: &ModeProfile) -> Result<()> {
        if p.values.len() != self.grid.len() {
            return Err(StripError::GridMismatch("mode profile length".into()));
        }
        let k = p.n.unsigned_abs() as usize;
        if k >= self.modes.len() {
            return Err(StripError::InvalidArgument(format!("mode {} beyond nx/2", p.n)));
        }
        self.modes[k] = if p.n < 0 { p.values.iter().map(|v| v.conj()).collect() } else { p.values.clone() };
        if k == 0 || k == self.nx / 2 {
            self.modes[k].iter_mut().for_each(|v| v.im = 0.0);
        }
        Ok(())
    }

    fn check(&self, other: &ModalField) -> Result<()> {
        if self.nx != other.nx {
            return Err(StripError::GridMismatch(format!("nx {} vs {}", self.nx, other.nx)));
        }
        self.grid.check_same(&other.grid)
    }

    pub fn add(&self, other: &ModalField, scale: f64) -> Result<ModalField> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.modes.iter_mut().zip(&other.modes) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * scale;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> ModalField {
        let mut out = self.clone();
        out.modes.iter_mut().flatten().for_each(|v| *v *= c);
        out
    }

    /// Spectral x-derivative (multiplication by `i n`; Nyquist dropped for odd order).
    pub fn ddx(&self) -> ModalField {
        let mut out = self.clone();
        let nyq = self.nx / 2;
        for (n, m) in out.modes.iter_mut().enumerate() {
            let f = if n == nyq { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, n as f64) };
            m.iter_mut().for_each(|v| *v *= f);
        }
        out
    }

    pub fn ddx2(&self) -> ModalField {
        let mut out = self.clone();
        for (n, m) in out.modes.iter_mut().enumerate() {
            let f = -((n * n) as f64);
            m.iter_mut().for_each(|v| *v *= f);
        }
        out
    }

    /// Second-order finite-difference derivative along the profile grid.
    pub fn dds(&self) -> ModalField {
        let h = self.grid.spacing();
        let mut out = self.clone();
        for m in out.modes.iter_mut() {
            *m = fd::d1(m, h);
        }
        out
    }

    pub fn dds2(&self) -> ModalField {
        let h = self.grid.spacing();
        let mut out = self.clone();
        for m in out.modes.iter_mut() {
            *m = fd::d2(m, h);
        }
        out
    }

    /// Sixth-order finite-difference derivative (`order` 1 or 2) along the profile grid.
    pub fn dds_high(&self, order: usize) -> ModalField {
        let h = self.grid.spacing();
        let mut out = self.clone();
        for m in out.modes.iter_mut() {
            *m = fd::dm_high(m, h, order);
        }
        out
    }

    /// Modes of the trace at profile node `k`.
    pub fn trace_modes(&self, k: usize) -> Vec<Complex64> {
        self.modes.iter().map(|m| m[k]).collect()
    }

    /// Physical samples of the trace at profile node `k`.
    pub fn trace(&self, k: usize) -> Vec<f64> {
        fourier::inverse_half(&self.trace_modes(k), self.nx)
    }

    /// Physical trace of the `m`-th profile derivative at the first or last node,
    /// by one-sided differences.
    pub fn trace_derivative(&self, m: usize, at_start: bool) -> Vec<f64> {
        let h = self.grid.spacing();
        let half: Vec<Complex64> = self.modes.iter().map(|p| fd::one_sided_derivative(p, h, m, at_start)).collect();
        fourier::inverse_half(&half, self.nx)
    }

    /// x-mean profile.
    pub fn mean_profile(&self) -> Vec<f64> {
        self.modes[0].iter().map(|v| v.re).collect()
    }

    /// Evaluates the truncated Fourier sum at `x` and profile node `k`.
    pub fn eval_node(&self, x: f64, k: usize) -> f64 {
        let nyq = self.nx / 2;
        let mut s = self.modes[0][k].re;
        for n in 1..self.modes.len() {
            let e = Complex64::from_polar(1.0, n as f64 * x);
            let c = self.modes[n][k] * e;
            s += if n == nyq { c.re } else { 2.0 * c.re };
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.samples().max_abs()
    }

    /// Largest x-mean magnitude over the profile grid.
    pub fn max_mean(&self) -> f64 {
        self.modes[0].iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().flatten().all(|v| v.norm() == 0.0)
    }
}

/// Field in a stretched boundary-layer coordinate with its far-field constant.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerField {
    pub field: ModalField,
    pub far_constant: f64,
}

impl LayerField {
    pub fn new(field: ModalField, far_constant: f64) -> Self {
        Self { field, far_constant }
    }

    pub fn zeros(nx: usize, grid: &Grid1D) -> Self {
        Self { field: ModalField::zeros(nx, grid), far_constant: 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ddx_of_cos_times_profile() {
        let g = Grid1D::interval(16).unwrap();
        let f = ModalField::from_fn(8, &g, |x, y| x.cos() * (1.0 + y * y));
        let d = f.ddx().samples();
        let xg = Grid1D::periodic(8).unwrap();
        for (k, y) in g.nodes().iter().enumerate() {
            for (i, x) in xg.nodes().iter().enumerate() {
                assert!((d.at(i, k) + x.sin() * (1.0 + y * y)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn reality_pairing() {
        let g = Grid1D::interval(8).unwrap();
        let f = ModalField::from_fn(8, &g, |x, y| (x + y).sin() + 0.3 * (2.0 * x).cos());
        let p = f.mode(1);
        let q = f.mode(-1);
        for (a, b) in p.values.iter().zip(&q.values) {
            assert!((a.conj() - b).norm() < 1e-15);
        }
    }

    #[test]
    fn eval_matches_samples() {
        let g = Grid1D::interval(8).unwrap();
        let f = ModalField::from_fn(8, &g, |x, y| (x + y).sin() + 0.3 * (4.0 * x).cos());
        let s = f.samples();
        for i in 0..8 {
            let x = 2.0 * PI * i as f64 / 8.0;
            assert!((f.eval_node(x, 3) - s.at(i, 3)).abs() < 1e-14);
        }
    }
}
