//! Right-hand sides of the lower-layer problems.

use spectral_strip::stretched::{LayerFrame, LayerTerms, WallTaylor};
use spectral_strip::{EpsPower, Grid1D, ModalField, Samples};

use crate::error::{LowerError, Result};
use crate::layer::decaying_pressure;

/// Lower-layer stretch: `y = eps^(2/3) eta`.
pub const LOWER_STRETCH: i32 = 2;

/// `f` drives the u-equation of the u-layer at `level` and already contains
/// `-p_x` of the decaying pressure `p` at `level + 2`, whose eta-derivative is `g`.
#[derive(Debug, Clone)]
pub struct LowerForcing {
    pub level: i32,
    pub f: Samples,
    pub g: Samples,
    pub pressure: ModalField,
}

/// Forcing for the lower u-layer at `level` (thirds of eps).
///
/// `euler` holds the outer wall data at `y = 0` (including the Couette level),
/// `layers` every lower term below `level` (u at `j`, v at `j + 2`) and their
/// decaying pressures. Terms of the unknown itself must be absent. The pressure
/// two levels up is built here from the y-momentum defect, since it enters the
/// x-momentum balance of the same order.
pub fn lower_forcing(level: i32, eta: &Grid1D, nx: usize, euler: &[WallTaylor], layers: &LayerTerms) -> Result<LowerForcing> {
    if !euler.iter().any(|e| e.level == 0) {
        return Err(LowerError::HierarchyGap { level: 0 });
    }
    for &j in layers.u.keys() {
        if j >= level {
            return Err(LowerError::InvalidArgument(format!("u-layer at level {j} is not below {level}")));
        }
        if !layers.v.contains_key(&(j + LOWER_STRETCH)) {
            return Err(LowerError::HierarchyGap { level: j + LOWER_STRETCH });
        }
    }
    let frame = LayerFrame::new(nx, eta.nodes(), LOWER_STRETCH)?;
    if layers.p.contains_key(&(level + LOWER_STRETCH)) {
        return Err(LowerError::InvalidArgument(format!("pressure at level {} is built here", level + LOWER_STRETCH)));
    }
    let d = frame.defect(euler, layers, level + LOWER_STRETCH);
    let g = d.y_momentum.coeff(level).map(|v| -v);
    let gm = ModalField::from_samples(&g, eta)?.named("g_b", EpsPower(level + LOWER_STRETCH));
    let pressure = decaying_pressure(&gm)?;
    let mut f = d.x_momentum.coeff(level + LOWER_STRETCH).map(|v| -v);
    f.add_assign(&pressure.ddx().samples(), -1.0);
    Ok(LowerForcing { level, f, g, pressure })
}

/// Largest `eta^2 |f|` over the grid.
pub fn weighted_tail(f: &Samples, eta: &Grid1D) -> f64 {
    let mut m: f64 = 0.0;
    for (k, e) in eta.nodes().iter().enumerate() {
        for v in f.row(k) {
            m = m.max(e * e * v.abs());
        }
    }
    m
}
