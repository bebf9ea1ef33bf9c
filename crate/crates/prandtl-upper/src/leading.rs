//! Leading-order upper layer on the zeta-grid.

use spectral_strip::{EpsPower, Grid1D, LayerField, ModalField, ProblemSpec, Samples};

use crate::error::{Result, UpperError};
use crate::layer::{extract_far_constant, upper_pressure, v_from_continuity, UpperLayer};
use crate::linear::{solve_linear, wall_flux, FarCondition, LinearCoefficients};
use crate::von_mises::{invert_von_mises, solve_von_mises, VonMisesConfig, VonMisesSolution};

#[derive(Debug, Clone)]
pub struct LeadingLayer {
    pub layer: UpperLayer,
    /// Far velocity of the discrete layer: `A` plus the O(h^2) plateau left by
    /// the zeta discretization of the Batchelor-Wood balance.
    pub far_velocity: f64,
    pub von_mises: VonMisesSolution,
    /// Newton residual history of the zeta-grid polish.
    pub polish_history: Vec<f64>,
}

impl LeadingLayer {
    pub fn far_velocity(&self) -> f64 {
        self.far_velocity
    }
}

/// `(A + u) u_x + w(u) u_z - u_zz` below the wall, with a ghost node (`u_z = 0`)
/// on the far row; zero on the wall row.
fn nonlinear_residual(a: f64, u: &Samples, h: f64) -> Samples {
    let ux = u.ddx(1);
    let w = wall_flux(u, h);
    let nx = u.nx;
    let mut r = Samples::zeros(nx, u.ns);
    for k in 0..u.ns - 1 {
        for i in 0..nx {
            let (c, p) = (u.at(i, k), u.at(i, k + 1));
            let m = if k == 0 { p } else { u.at(i, k - 1) };
            r.data[k * nx + i] =
                (a + c) * ux.at(i, k) + w.at(i, k) * (p - m) / (2.0 * h) - (p - 2.0 * c + m) / (h * h);
        }
    }
    r
}

/// Solves the von Mises problem, maps it to the zeta-grid and polishes it with
/// Newton's method on the zeta discretization so later linear solves see a
/// discretely exact background.
pub fn leading_layer(spec: &ProblemSpec, nx: usize, zeta: &Grid1D, cfg: &VonMisesConfig) -> Result<LeadingLayer> {
    let vm = solve_von_mises(spec, nx, cfg)?;
    let a = vm.far_velocity();
    let h = zeta.spacing();
    let mut u = invert_von_mises(&vm, zeta)?.samples();
    let wall: Vec<f64> = vm.wall.iter().map(|w| w - a).collect();
    let n = zeta.len() - 1;
    u.row_mut(n).copy_from_slice(&wall);

    let mut r = nonlinear_residual(a, &u, h);
    let mut norm = r.max_abs();
    let mut history = vec![norm];
    let tol = cfg.tol.max(1e-13);
    let mut it = 0;
    while norm > tol {
        if it >= cfg.max_iterations {
            return Err(UpperError::NotConverged { iterations: it, history });
        }
        it += 1;
        let c = LinearCoefficients::from_profile(a, &u, wall_flux(&u, h), h);
        let rhs = r.map(|v| -v);
        let du = solve_linear(&c, &rhs, &vec![0.0; nx], FarCondition::Neumann)?;
        let mut t = 1.0;
        loop {
            let mut trial = u.clone();
            trial.add_assign(&du, t);
            let rt = nonlinear_residual(a, &trial, h);
            let nt = rt.max_abs();
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
    let uf = ModalField::from_samples(&u, zeta)?.named("u_p", EpsPower(0));
    let (plateau, ul) = extract_far_constant(&LayerField::new(uf, 0.0))?;
    let v = v_from_continuity(&ul)?;
    let p = upper_pressure(&ModalField::zeros(nx, zeta).named("p_p", EpsPower(3)))?;
    Ok(LeadingLayer {
        layer: UpperLayer { level: EpsPower(0), u: ul, v, p },
        far_velocity: a + plateau,
        von_mises: vm,
        polish_history: history,
    })
}
