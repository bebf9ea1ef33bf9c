//! Right-hand sides of the higher-order upper-layer problems.

use spectral_strip::stretched::{LayerFrame, LayerTerms, WallTaylor};
use spectral_strip::{Grid1D, Samples};

use crate::error::{Result, UpperError};

/// Upper-layer stretch: `y - 1 = eps * zeta`.
pub const UPPER_STRETCH: i32 = 3;

/// `f` drives the u-equation at the current level; `g` is the zeta-derivative
/// of the pressure three levels up.
#[derive(Debug, Clone)]
pub struct UpperForcing {
    pub level: i32,
    pub f: Samples,
    pub g: Samples,
}

/// Forcing for the upper u-layer at `level` (thirds of eps).
///
/// `euler` holds the outer wall data at `y = 1`, `layers` every upper term below
/// `level` (u at `j`, v at `j + 3`) and the pressures up to `level`. Terms of the
/// unknown itself must be absent.
pub fn upper_forcing(level: i32, zeta: &Grid1D, nx: usize, euler: &[WallTaylor], layers: &LayerTerms) -> Result<UpperForcing> {
    if !euler.iter().any(|e| e.level == 0) {
        return Err(UpperError::HierarchyGap { level: 0 });
    }
    if !layers.u.contains_key(&0) && level > 0 {
        return Err(UpperError::HierarchyGap { level: 0 });
    }
    for &j in layers.u.keys() {
        if j >= level {
            return Err(UpperError::InvalidArgument(format!("u-layer at level {j} is not below {level}")));
        }
        if !layers.v.contains_key(&(j + UPPER_STRETCH)) {
            return Err(UpperError::HierarchyGap { level: j + UPPER_STRETCH });
        }
    }
    let frame = LayerFrame::new(nx, zeta.nodes(), UPPER_STRETCH)?;
    let d = frame.defect(euler, layers, level);
    Ok(UpperForcing {
        level,
        f: d.x_momentum.coeff(level).map(|v| -v),
        g: d.y_momentum.coeff(level).map(|v| -v),
    })
}

/// Largest `|zeta|^2 |f|` over the grid.
pub fn weighted_tail(f: &Samples, zeta: &Grid1D) -> f64 {
    let mut m: f64 = 0.0;
    for (k, z) in zeta.nodes().iter().enumerate() {
        for v in f.row(k) {
            m = m.max(z * z * v.abs());
        }
    }
    m
}
