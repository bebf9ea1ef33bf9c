//! Partially staggered discretization of the strip.
//!
//! Unknown block `k` holds `(u_k, v_k, p_{k-1/2})` as physical samples in `x`,
//! with row groups x-momentum, y-momentum and continuity at `k - 1/2`. The
//! first block carries a dummy pressure pinned to zero. x-derivatives use
//! the dense Fourier differentiation matrix, y-derivatives centered differences,
//! continuity is imposed at half nodes with the trapezoid average of `u_x`.

use nalgebra::{DMatrix, DVector};
use spectral_strip::blocktri::BlockTridiagonal;
use spectral_strip::{fourier, Samples};

use crate::error::{NsError, Result};

/// Data of the steady problem `(u.grad)u + grad p - eps^2 lap u = (f_u, g_v)`,
/// `div u = 0`, `u = bottom/top` and `v = 0` on the walls.
#[derive(Debug, Clone)]
pub struct NsProblem {
    pub eps: f64,
    /// Drop the convective terms (Stokes operator).
    pub convection: bool,
    pub bottom: Vec<f64>,
    pub top: Vec<f64>,
    pub f_u: Option<Samples>,
    pub g_v: Option<Samples>,
}

impl NsProblem {
    pub fn check(&self, nx: usize, ny: usize) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(NsError::InvalidEpsilon(self.eps));
        }
        if self.bottom.len() != nx || self.top.len() != nx {
            return Err(NsError::Mismatch(format!("wall data must have {nx} samples")));
        }
        for f in [&self.f_u, &self.g_v].into_iter().flatten() {
            if f.nx != nx || f.ns != ny + 1 {
                return Err(NsError::Mismatch(format!("forcing is {}x{}, grid is {}x{}", f.nx, f.ns, nx, ny + 1)));
            }
        }
        Ok(())
    }
}

/// Velocity on nodes, pressure on half nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Unknowns {
    pub u: Samples,
    pub v: Samples,
    pub p_half: Samples,
}

pub(crate) struct Layout {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub d: DMatrix<f64>,
    pub d2: DMatrix<f64>,
    /// Oscillatory projections replacing the continuity rows at the top half node.
    top_rows: DMatrix<f64>,
}

fn row_block(m: &mut DMatrix<f64>, r: usize, c: usize, b: &DMatrix<f64>) {
    let n = b.nrows();
    let mut v = m.view_mut((r, c), (n, b.ncols()));
    v += b;
}

fn diag(x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(x))
}

fn scale_rows(x: &[f64], m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for (i, s) in x.iter().enumerate() {
        out.row_mut(i).scale_mut(*s);
    }
    out
}

impl Layout {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx < 4 || nx % 2 != 0 {
            return Err(spectral_strip::StripError::BadSampleCount(nx).into());
        }
        if ny < 4 {
            return Err(spectral_strip::StripError::TooFewNodes { min: 4, got: ny }.into());
        }
        let d = DMatrix::from_row_slice(nx, nx, &fourier::diff_matrix(nx));
        let d2 = &d * &d;
        let mut top_rows = DMatrix::zeros(nx, nx);
        let dx = 2.0 * std::f64::consts::PI / nx as f64;
        for n in 1..nx / 2 {
            for i in 0..nx {
                let a = (n * i) as f64 * dx;
                top_rows[(2 * n, i)] = a.cos();
                top_rows[(2 * n + 1, i)] = a.sin();
            }
        }
        Ok(Self { nx, ny, h: 1.0 / ny as f64, d, d2, top_rows })
    }

    fn dx(&self, row: &[f64]) -> DVector<f64> {
        &self.d * DVector::from_column_slice(row)
    }

    fn dxx(&self, row: &[f64]) -> DVector<f64> {
        &self.d2 * DVector::from_column_slice(row)
    }

    pub fn pack(&self, x: &Unknowns) -> Vec<DVector<f64>> {
        let nx = self.nx;
        (0..=self.ny)
            .map(|k| {
                let mut b = DVector::zeros(3 * nx);
                b.rows_mut(0, nx).copy_from_slice(x.u.row(k));
                b.rows_mut(nx, nx).copy_from_slice(x.v.row(k));
                if k > 0 {
                    b.rows_mut(2 * nx, nx).copy_from_slice(x.p_half.row(k - 1));
                }
                b
            })
            .collect()
    }

    pub fn unpack(&self, b: &[DVector<f64>]) -> Unknowns {
        let nx = self.nx;
        let mut x = Unknowns {
            u: Samples::zeros(nx, self.ny + 1),
            v: Samples::zeros(nx, self.ny + 1),
            p_half: Samples::zeros(nx, self.ny),
        };
        for (k, blk) in b.iter().enumerate() {
            x.u.row_mut(k).copy_from_slice(blk.rows(0, nx).as_slice());
            x.v.row_mut(k).copy_from_slice(blk.rows(nx, nx).as_slice());
            if k > 0 {
                x.p_half.row_mut(k - 1).copy_from_slice(blk.rows(2 * nx, nx).as_slice());
            }
        }
        x
    }

    /// Continuity `D (u_k + u_{k+1})/2 + (v_{k+1} - v_k)/h` at half node `k`.
    pub fn divergence(&self, x: &Unknowns) -> Samples {
        let mut out = Samples::zeros(self.nx, self.ny);
        for k in 0..self.ny {
            let avg: Vec<f64> = x.u.row(k).iter().zip(x.u.row(k + 1)).map(|(a, b)| 0.5 * (a + b)).collect();
            let ux = self.dx(&avg);
            for i in 0..self.nx {
                out.row_mut(k)[i] = ux[i] + (x.v.row(k + 1)[i] - x.v.row(k)[i]) / self.h;
            }
        }
        out
    }

    /// Pressure pin rows: `p(x_0, 1) = 0` by linear extrapolation, and no Nyquist content.
    fn gauge(&self, x: &Unknowns) -> (f64, f64) {
        let top = x.p_half.row(self.ny - 1);
        let below = x.p_half.row(self.ny - 2);
        let pin = 1.5 * top[0] - 0.5 * below[0];
        let nyq = top.iter().enumerate().map(|(i, p)| if i % 2 == 0 { *p } else { -*p }).sum();
        (pin, nyq)
    }

    pub fn residual(&self, eq: &NsProblem, x: &Unknowns) -> Vec<DVector<f64>> {
        let (nx, n, h) = (self.nx, self.ny, self.h);
        let e2 = eq.eps * eq.eps;
        let conv = if eq.convection { 1.0 } else { 0.0 };
        let div = self.divergence(x);
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut r = DVector::zeros(3 * nx);
            let (u, v) = (x.u.row(k), x.v.row(k));
            if k == 0 || k == n {
                let wall = if k == 0 { &eq.bottom } else { &eq.top };
                for i in 0..nx {
                    r[i] = u[i] - wall[i];
                    r[nx + i] = v[i];
                }
            } else {
                let (um, up) = (x.u.row(k - 1), x.u.row(k + 1));
                let (vm, vp) = (x.v.row(k - 1), x.v.row(k + 1));
                let (pm, pp) = (x.p_half.row(k - 1), x.p_half.row(k));
                let pbar: Vec<f64> = pm.iter().zip(pp).map(|(a, b)| 0.5 * (a + b)).collect();
                let (ux, uxx, vx, vxx, px) = (self.dx(u), self.dxx(u), self.dx(v), self.dxx(v), self.dx(&pbar));
                for i in 0..nx {
                    let uy = (up[i] - um[i]) / (2.0 * h);
                    let vy = (vp[i] - vm[i]) / (2.0 * h);
                    let uyy = (up[i] - 2.0 * u[i] + um[i]) / (h * h);
                    let vyy = (vp[i] - 2.0 * v[i] + vm[i]) / (h * h);
                    let py = (pp[i] - pm[i]) / h;
                    r[i] = conv * (u[i] * ux[i] + v[i] * uy) + px[i] - e2 * (uxx[i] + uyy);
                    r[nx + i] = conv * (u[i] * vx[i] + v[i] * vy) + py - e2 * (vxx[i] + vyy);
                    if let Some(f) = &eq.f_u {
                        r[i] -= f.at(i, k);
                    }
                    if let Some(g) = &eq.g_v {
                        r[nx + i] -= g.at(i, k);
                    }
                }
            }
            if k > 0 && k < n {
                r.rows_mut(2 * nx, nx).copy_from_slice(div.row(k - 1));
            } else if k == n {
                let c = &self.top_rows * DVector::from_column_slice(div.row(k - 1));
                r.rows_mut(2 * nx, nx).copy_from(&c);
                let (pin, nyq) = self.gauge(x);
                r[2 * nx] = pin;
                r[2 * nx + 1] = nyq;
            }
            out.push(r);
        }
        out
    }

    pub fn jacobian(&self, eq: &NsProblem, x: &Unknowns) -> BlockTridiagonal<f64> {
        let (nx, n, h) = (self.nx, self.ny, self.h);
        let e2 = eq.eps * eq.eps;
        let conv = if eq.convection { 1.0 } else { 0.0 };
        let id = DMatrix::<f64>::identity(nx, nx);
        let mut j = BlockTridiagonal::zeros(n + 1, 3 * nx);
        let half_d = &self.d * 0.5;
        let lap_diag = (&self.d2 - &id * (2.0 / (h * h))) * e2;
        for k in 0..=n {
            let (u, v) = (x.u.row(k), x.v.row(k));
            if k == 0 || k == n {
                row_block(&mut j.diag[k], 0, 0, &id);
                row_block(&mut j.diag[k], nx, nx, &id);
            } else {
                let (um, up) = (x.u.row(k - 1), x.u.row(k + 1));
                let (vm, vp) = (x.v.row(k - 1), x.v.row(k + 1));
                let ux = self.dx(u);
                let vx = self.dx(v);
                let uy: Vec<f64> = (0..nx).map(|i| (up[i] - um[i]) / (2.0 * h)).collect();
                let vy: Vec<f64> = (0..nx).map(|i| (vp[i] - vm[i]) / (2.0 * h)).collect();
                let adv = scale_rows(u, &self.d);
                let off: Vec<f64> = v.iter().map(|w| conv * w / (2.0 * h)).collect();
                let side_up = diag(&off) - &id * (e2 / (h * h));
                let side_dn = -diag(&off) - &id * (e2 / (h * h));

                let dg = &mut j.diag[k];
                row_block(dg, 0, 0, &((diag(ux.as_slice()) + &adv) * conv - &lap_diag));
                row_block(dg, 0, nx, &(diag(&uy) * conv));
                row_block(dg, 0, 2 * nx, &half_d);
                row_block(dg, nx, 0, &(diag(vx.as_slice()) * conv));
                row_block(dg, nx, nx, &((&adv + diag(&vy)) * conv - &lap_diag));
                row_block(dg, nx, 2 * nx, &(-&id / h));

                let lo = &mut j.lower[k];
                row_block(lo, 0, 0, &side_dn);
                row_block(lo, nx, nx, &side_dn);

                let upm = &mut j.upper[k];
                row_block(upm, 0, 0, &side_up);
                row_block(upm, 0, 2 * nx, &half_d);
                row_block(upm, nx, nx, &side_up);
                row_block(upm, nx, 2 * nx, &(&id / h));
            }
            if k > 0 {
                let (cu, cv_below, cv_here) = if k == n {
                    (&self.top_rows * &half_d, &self.top_rows * (-&id / h), &self.top_rows * (&id / h))
                } else {
                    (half_d.clone(), -&id / h, &id / h)
                };
                row_block(&mut j.lower[k], 2 * nx, 0, &cu);
                row_block(&mut j.lower[k], 2 * nx, nx, &cv_below);
                row_block(&mut j.diag[k], 2 * nx, 0, &cu);
                row_block(&mut j.diag[k], 2 * nx, nx, &cv_here);
                if k == n {
                    j.diag[k][(2 * nx, 2 * nx)] = 1.5;
                    j.lower[k][(2 * nx, 2 * nx)] = -0.5;
                    for i in 0..nx {
                        j.diag[k][(2 * nx + 1, 2 * nx + i)] = if i % 2 == 0 { 1.0 } else { -1.0 };
                    }
                }
            } else {
                row_block(&mut j.diag[k], 2 * nx, 2 * nx, &id);
            }
        }
        j
    }

    /// Discrete `L^2(T x [0,1])` norm of a block residual.
    pub fn norm(&self, r: &[DVector<f64>]) -> f64 {
        let w = self.h * 2.0 * std::f64::consts::PI / self.nx as f64;
        (r.iter().map(|b| b.norm_squared()).sum::<f64>() * w).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(nx: usize, eps: f64) -> NsProblem {
        let top: Vec<f64> = (0..nx).map(|i| 1.0 + 0.1 * (i as f64 * 2.0 * std::f64::consts::PI / nx as f64).cos()).collect();
        NsProblem { eps, convection: true, bottom: vec![0.0; nx], top, f_u: None, g_v: None }
    }

    fn state(l: &Layout) -> Unknowns {
        let mut x = Unknowns {
            u: Samples::zeros(l.nx, l.ny + 1),
            v: Samples::zeros(l.nx, l.ny + 1),
            p_half: Samples::zeros(l.nx, l.ny),
        };
        for (j, a) in x.u.data.iter_mut().enumerate() {
            *a = (0.37 * j as f64).sin();
        }
        for (j, a) in x.v.data.iter_mut().enumerate() {
            *a = (0.91 * j as f64).cos() * 0.3;
        }
        for (j, a) in x.p_half.data.iter_mut().enumerate() {
            *a = (0.13 * j as f64).sin();
        }
        x
    }

    #[test]
    fn jacobian_matches_differences() {
        let l = Layout::new(8, 6).unwrap();
        let eq = problem(8, 0.3);
        let x = state(&l);
        let j = l.jacobian(&eq, &x);
        let base = l.pack(&x);
        let dir: Vec<DVector<f64>> = base.iter().enumerate().map(|(k, b)| b.map(|v| (v * 7.0 + k as f64).cos())).collect();
        let jd = j.apply(&dir);
        let step = 1e-6;
        let shift = |s: f64| {
            let b: Vec<DVector<f64>> = base.iter().zip(&dir).map(|(a, d)| a + d * s).collect();
            l.residual(&eq, &l.unpack(&b))
        };
        let (rp, rm) = (shift(step), shift(-step));
        for k in 0..=l.ny {
            // the dummy pressure of the first block is not a residual entry
            let rows = if k == 0 { 2 * l.nx } else { 3 * l.nx };
            for i in 0..rows {
                let fd = (rp[k][i] - rm[k][i]) / (2.0 * step);
                assert!((fd - jd[k][i]).abs() < 1e-5 * (1.0 + fd.abs()), "block {k} row {i}: {fd} vs {}", jd[k][i]);
            }
        }
    }

    #[test]
    fn pack_round_trips() {
        let l = Layout::new(8, 6).unwrap();
        let x = state(&l);
        assert_eq!(l.unpack(&l.pack(&x)), x);
    }
}
