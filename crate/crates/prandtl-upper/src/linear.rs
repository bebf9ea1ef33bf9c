//! Linearized upper-layer operator
//!
//! `L u = ub u_x + u ub_x + vb u_z + w ub_z - u_zz`, `w(x,z) = int_z^0 u_x dz'`,
//!
//! on `T x [z_min, 0]` with a Dirichlet wall at `z = 0`. The far node takes either
//! `u_z = 0` (ghost node) or a Dirichlet value. Unknowns `(u, w)` are coupled in
//! one block-tridiagonal system in `z`; `x` is handled by the dense spectral
//! differentiation matrix.

use nalgebra::{DMatrix, DVector};
use spectral_strip::blocktri::BlockTridiagonal;
use spectral_strip::{fourier, Samples};

use crate::error::{Result, UpperError};
use crate::homogenizer::Homogenizer;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FarCondition {
    /// `u_z = 0` at the far node; the far value is free.
    Neumann,
    /// `u = value` at the far node.
    Dirichlet(f64),
}

/// Background coefficients sampled on `x-grid x z-grid` (row `k` at `z_k`).
#[derive(Debug, Clone)]
pub struct LinearCoefficients {
    pub spacing: f64,
    pub base: Samples,
    pub base_x: Samples,
    pub base_z: Samples,
    pub drift: Samples,
}

impl LinearCoefficients {
    /// `ub = A + u0`, derivatives of `u0` spectral in x and centered in z.
    /// `ub_z` vanishes on the far row, matching the ghost-node far condition.
    pub fn from_profile(far: f64, u0: &Samples, drift: Samples, spacing: f64) -> Self {
        let mut base_z = u0.dds(spacing, 1);
        base_z.row_mut(0).iter_mut().for_each(|v| *v = 0.0);
        Self { spacing, base: u0.map(|v| far + v), base_x: u0.ddx(1), base_z, drift }
    }

    fn nx(&self) -> usize {
        self.base.nx
    }

    fn ns(&self) -> usize {
        self.base.ns
    }
}

/// `w_k = int_{z_k}^0 u_x` by the trapezoid rule, `w` at the wall is 0.
pub fn wall_flux(u: &Samples, spacing: f64) -> Samples {
    let ux = u.ddx(1);
    let nx = u.nx;
    let n = u.ns - 1;
    let mut w = Samples::zeros(nx, u.ns);
    for k in (0..n).rev() {
        for i in 0..nx {
            w.data[k * nx + i] = w.data[(k + 1) * nx + i] + 0.5 * spacing * (ux.at(i, k) + ux.at(i, k + 1));
        }
    }
    w
}

/// Applies the discrete operator row by row. The wall row is zero; the far row
/// follows the far condition (ghost node for Neumann, zero for Dirichlet).
pub fn apply_operator(c: &LinearCoefficients, u: &Samples, far: FarCondition) -> Samples {
    let nx = c.nx();
    let n = c.ns() - 1;
    let h = c.spacing;
    let ux = u.ddx(1);
    let w = wall_flux(u, h);
    let mut out = Samples::zeros(nx, c.ns());
    for k in 0..n {
        if k == 0 && matches!(far, FarCondition::Dirichlet(_)) {
            continue;
        }
        for i in 0..nx {
            let (uz, uzz) = if k == 0 {
                (0.0, 2.0 * (u.at(i, 1) - u.at(i, 0)) / (h * h))
            } else {
                let (m, p) = (u.at(i, k - 1), u.at(i, k + 1));
                ((p - m) / (2.0 * h), (p - 2.0 * u.at(i, k) + m) / (h * h))
            };
            out.data[k * nx + i] = c.base.at(i, k) * ux.at(i, k)
                + u.at(i, k) * c.base_x.at(i, k)
                + c.drift.at(i, k) * uz
                + w.at(i, k) * c.base_z.at(i, k)
                - uzz;
        }
    }
    out
}

/// Solves `L u = f` with `u = wall` at `z = 0` and the given far condition.
pub fn solve_linear(c: &LinearCoefficients, f: &Samples, wall: &[f64], far: FarCondition) -> Result<Samples> {
    let nx = c.nx();
    let ns = c.ns();
    if f.nx != nx || f.ns != ns || wall.len() != nx {
        return Err(UpperError::InvalidArgument("coefficient/forcing shape mismatch".into()));
    }
    let n = ns - 1;
    let h = c.spacing;
    let h2 = h * h;
    let d = DMatrix::from_row_slice(nx, nx, &fourier::diff_matrix(nx));
    let m = 2 * nx;
    let mut sys = BlockTridiagonal::<f64>::zeros(ns, m);
    let mut rhs = vec![DVector::zeros(m); ns];
    for k in 0..n {
        let (diag, lower, upper) = (&mut sys.diag[k], &mut sys.lower[k], &mut sys.upper[k]);
        match (k, far) {
            (0, FarCondition::Dirichlet(v)) => {
                for i in 0..nx {
                    diag[(i, i)] = 1.0;
                    rhs[k][i] = v;
                }
            }
            _ => {
                for i in 0..nx {
                    let ub = c.base.at(i, k);
                    for j in 0..nx {
                        diag[(i, j)] = ub * d[(i, j)];
                    }
                    diag[(i, i)] += c.base_x.at(i, k) + 2.0 / h2;
                    diag[(i, nx + i)] = c.base_z.at(i, k);
                    if k == 0 {
                        upper[(i, i)] = -2.0 / h2;
                    } else {
                        let vb = c.drift.at(i, k);
                        lower[(i, i)] = -vb / (2.0 * h) - 1.0 / h2;
                        upper[(i, i)] = vb / (2.0 * h) - 1.0 / h2;
                    }
                    rhs[k][i] = f.at(i, k);
                }
            }
        }
        // w-link between nodes k and k+1
        for i in 0..nx {
            diag[(nx + i, nx + i)] = -1.0 / h;
            upper[(nx + i, nx + i)] = 1.0 / h;
            for j in 0..nx {
                diag[(nx + i, j)] = 0.5 * d[(i, j)];
                upper[(nx + i, j)] = 0.5 * d[(i, j)];
            }
        }
    }
    for i in 0..m {
        sys.diag[n][(i, i)] = 1.0;
    }
    for i in 0..nx {
        rhs[n][i] = wall[i];
    }
    let x = sys.solve(&rhs)?;
    let mut u = Samples::zeros(nx, ns);
    for k in 0..ns {
        u.row_mut(k).copy_from_slice(&x[k].as_slice()[..nx]);
    }
    Ok(u)
}

/// Solves `L u = f`, `u(x,0) = wall(x)`, through the lift `u = u~ + kappa(z) wall(x)`
/// so that the block solve sees homogeneous wall data.
pub fn solve_lifted(c: &LinearCoefficients, f: &Samples, wall: &[f64], zeta: &[f64], far: FarCondition) -> Result<Samples> {
    let nx = c.nx();
    let kappa = Homogenizer::upper();
    let mut lift = Samples::zeros(nx, c.ns());
    for (k, &z) in zeta.iter().enumerate() {
        let kv = kappa.value(z);
        for i in 0..nx {
            lift.data[k * nx + i] = kv * wall[i];
        }
    }
    let mut g = f.clone();
    g.add_assign(&apply_operator(c, &lift, far), -1.0);
    let mut u = solve_linear(c, &g, &vec![0.0; nx], far)?;
    u.add_assign(&lift, 1.0);
    Ok(u)
}

/// Max of the discrete residual `L u - f` over rows that carry the equation.
pub fn residual_max(c: &LinearCoefficients, u: &Samples, f: &Samples, far: FarCondition) -> f64 {
    let r = apply_operator(c, u, far);
    let first = if matches!(far, FarCondition::Dirichlet(_)) { 1 } else { 0 };
    let nx = c.nx();
    (first..c.ns() - 1)
        .flat_map(|k| (0..nx).map(move |i| (i, k)))
        .fold(0.0, |m, (i, k)| m.max((r.at(i, k) - f.at(i, k)).abs()))
}
