//! Leading-order upper layer in von Mises variables: `2 U_x = (U^2)_psipsi`
//! on `T x [psi_min, 0]`, `U(x,0) = alpha + delta f(x)`, `U -> A` far away.
//!
//! The periodic problem is solved globally: spectral differentiation in `x`,
//! second-order differences in `psi`, Newton's method on the coupled system.

use nalgebra::{DMatrix, DVector};
use spectral_strip::blocktri::BlockTridiagonal;
use spectral_strip::fourier;
use spectral_strip::interp;
use spectral_strip::{fd, Grid1D, ModalField, ProblemSpec, Samples};

use crate::batchelor::{batchelor_constant, BatchelorConstants};
use crate::error::{Result, UpperError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMisesConfig {
    /// `psi_min = -extent * A`.
    pub extent: f64,
    pub intervals: usize,
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for VonMisesConfig {
    fn default() -> Self {
        Self { extent: 40.0, intervals: 1600, tol: 1e-10, max_iterations: 30 }
    }
}

#[derive(Debug, Clone)]
pub struct VonMisesSolution {
    /// Nodes in `psi`, ascending to the wall at 0.
    pub psi: Vec<f64>,
    pub spacing: f64,
    /// `U` with row `k` at `psi[k]`.
    pub velocity: Samples,
    pub constants: BatchelorConstants,
    pub wall: Vec<f64>,
    pub residual_history: Vec<f64>,
}

fn dense_diff(nx: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(nx, nx, &fourier::diff_matrix(nx))
}

/// Pointwise residual `2 U_x - (U^2)_psipsi` at interior nodes, zero on the ends.
fn residual(u: &Samples, h: f64) -> Samples {
    let nx = u.nx;
    let n = u.ns - 1;
    let ux = u.ddx(1);
    let mut r = Samples::zeros(nx, u.ns);
    for k in 1..n {
        for i in 0..nx {
            let q = |kk: usize| u.at(i, kk) * u.at(i, kk);
            r.data[k * nx + i] = 2.0 * ux.at(i, k) - (q(k + 1) - 2.0 * q(k) + q(k - 1)) / (h * h);
        }
    }
    r
}

fn l2(r: &Samples, h: f64) -> f64 {
    let hx = 2.0 * std::f64::consts::PI / r.nx as f64;
    (r.data.iter().map(|v| v * v).sum::<f64>() * h * hx).sqrt()
}

pub fn solve_von_mises(spec: &ProblemSpec, nx: usize, cfg: &VonMisesConfig) -> Result<VonMisesSolution> {
    let constants = batchelor_constant(spec)?;
    let a = constants.far_velocity;
    Grid1D::periodic(nx)?;
    if cfg.intervals < 8 {
        return Err(UpperError::InvalidArgument(format!("psi intervals {}", cfg.intervals)));
    }
    let n = cfg.intervals;
    let psi_min = -cfg.extent * a;
    let h = -psi_min / n as f64;
    let psi: Vec<f64> = (0..=n).map(|k| psi_min + k as f64 * h).collect();
    let wall = spec.wall_samples(nx);

    // linearized decay rate of the first mode
    let rate = (0.5 / a).sqrt();
    let mut u = Samples::zeros(nx, n + 1);
    for k in 0..=n {
        let w = (rate * psi[k]).exp();
        for i in 0..nx {
            u.data[k * nx + i] = a + (wall[i] - a) * w;
        }
    }
    u.row_mut(0).iter_mut().for_each(|v| *v = a);
    u.row_mut(n).copy_from_slice(&wall);

    let d = dense_diff(nx);
    let mut r = residual(&u, h);
    let mut norm = l2(&r, h);
    let mut history = vec![norm];
    let mut it = 0;
    while norm > cfg.tol {
        if it >= cfg.max_iterations {
            return Err(UpperError::NotConverged { iterations: it, history });
        }
        it += 1;
        let mut sys = BlockTridiagonal::<f64>::zeros(n + 1, nx);
        let mut rhs = vec![DVector::zeros(nx); n + 1];
        sys.diag[0] = DMatrix::identity(nx, nx);
        sys.diag[n] = DMatrix::identity(nx, nx);
        let h2 = h * h;
        for k in 1..n {
            let mut dk = &d * 2.0;
            for i in 0..nx {
                dk[(i, i)] += 4.0 * u.at(i, k) / h2;
                sys.lower[k][(i, i)] = -2.0 * u.at(i, k - 1) / h2;
                sys.upper[k][(i, i)] = -2.0 * u.at(i, k + 1) / h2;
                rhs[k][i] = -r.at(i, k);
            }
            sys.diag[k] = dk;
        }
        let step = sys.solve(&rhs)?;
        let mut t = 1.0;
        loop {
            let mut trial = u.clone();
            for k in 1..n {
                for i in 0..nx {
                    trial.data[k * nx + i] += t * step[k][i];
                }
            }
            let rt = residual(&trial, h);
            let nt = l2(&rt, h);
            if nt < norm || t < 1e-3 {
                u = trial;
                r = rt;
                norm = nt;
                break;
            }
            t *= 0.5;
        }
        history.push(norm);
    }
    if u.data.iter().any(|v| !(*v > 0.0)) {
        return Err(UpperError::InvalidArgument("von Mises velocity lost positivity".into()));
    }
    Ok(VonMisesSolution { psi, spacing: h, velocity: u, constants, wall, residual_history: history })
}

impl VonMisesSolution {
    pub fn far_velocity(&self) -> f64 {
        self.constants.far_velocity
    }

    pub fn residual_norm(&self) -> f64 {
        l2(&residual(&self.velocity, self.spacing), self.spacing)
    }

    /// `max_psi |d/dpsi int U^2 dx|` by first differences between nodes.
    pub fn invariant_defect(&self) -> f64 {
        let q: Vec<f64> = (0..self.psi.len())
            .map(|k| fourier::quad_x(&self.velocity.row(k).iter().map(|v| v * v).collect::<Vec<_>>()))
            .collect();
        q.windows(2).map(|w| ((w[1] - w[0]) / self.spacing).abs()).fold(0.0, f64::max)
    }

    /// Largest `|U - A|` on the far node.
    pub fn tail_defect(&self) -> f64 {
        let a = self.far_velocity();
        self.velocity.row(0).iter().fold(0.0, |m, v| m.max((v - a).abs()))
    }

    /// Complex amplitude of Fourier mode `n` along `psi`.
    pub fn mode_profile(&self, n: usize) -> Vec<spectral_strip::Complex64> {
        (0..self.psi.len()).map(|k| fourier::forward_half(self.velocity.row(k))[n]).collect()
    }

    /// Stretched coordinate `zeta(x_i, psi_k) = -int_psi^0 dpsi' / U`, per x-node.
    pub fn zeta_map(&self) -> Result<Vec<Vec<f64>>> {
        let nx = self.velocity.nx;
        let mut out = Vec::with_capacity(nx);
        for i in 0..nx {
            let inv: Vec<f64> = self.velocity.column(i).iter().map(|u| 1.0 / u).collect();
            let z: Vec<f64> = fd::cumtrapz_rev(&inv, self.spacing).into_iter().map(|v| -v).collect();
            if z.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(UpperError::NonMonotone { node: i });
            }
            out.push(z);
        }
        Ok(out)
    }
}

/// `u_p(x, zeta) = U - A` on the zeta-grid, by cubic interpolation of the
/// inverted stream map. Nodes beyond the mapped range take the far value.
pub fn invert_von_mises(vm: &VonMisesSolution, zeta: &Grid1D) -> Result<ModalField> {
    let nx = vm.velocity.nx;
    let a = vm.far_velocity();
    let maps = vm.zeta_map()?;
    let mut s = Samples::zeros(nx, zeta.len());
    for (i, z) in maps.iter().enumerate() {
        // interpolate the deviation so that constant data stays exactly zero
        let col: Vec<f64> = vm.velocity.column(i).iter().map(|u| u - a).collect();
        for (k, &zt) in zeta.nodes().iter().enumerate() {
            s.data[k * nx + i] = if zt <= z[0] { col[0] } else { interp::cubic_monotone(z, &col, zt) };
        }
        let w = zeta.wall_index();
        s.data[w * nx + i] = vm.wall[i] - a;
    }
    Ok(ModalField::from_samples(&s, zeta)?)
}
