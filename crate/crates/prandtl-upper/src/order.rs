//! Higher-order upper-layer solves.

use spectral_strip::{EpsPower, Grid1D, LayerField, ModalField};

use crate::error::{Result, UpperError};
use crate::forcing::UpperForcing;
use crate::layer::{extract_far_constant, upper_pressure, v_from_continuity, UpperLayer, DECAY_TOL};
use crate::linear::{solve_lifted, FarCondition, LinearCoefficients};

/// Solves the linearized layer problem at `forcing.level` with wall data
/// `u(x,0) = wall(x)`. The returned u-layer has its far constant shifted off and
/// recorded; the pressure is the one sourced by `forcing.g`, three levels up.
pub fn solve_upper_linear_bl(zeta: &Grid1D, c: &LinearCoefficients, forcing: &UpperForcing, wall: &[f64]) -> Result<UpperLayer> {
    let far = zeta.far_index();
    let scale = 1.0 + forcing.f.max_abs();
    let tail = forcing.f.row(far).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if tail > DECAY_TOL * scale {
        return Err(UpperError::NotDecaying { what: "upper forcing", tail });
    }
    let u = solve_lifted(c, &forcing.f, wall, zeta.nodes(), FarCondition::Neumann)?;
    let level = EpsPower(forcing.level);
    let uf = ModalField::from_samples(&u, zeta)?.named("u_p", level);
    let (a_k, shifted) = extract_far_constant(&LayerField::new(uf, 0.0))?;
    let v = v_from_continuity(&shifted)?;
    let g = ModalField::from_samples(&forcing.g, zeta)?.named("p_p", EpsPower(forcing.level + 3));
    let p = upper_pressure(&g)?;
    Ok(UpperLayer { level, u: LayerField::new(shifted.field, a_k), v, p })
}
