//! Quadratic interactions between outer terms.

use std::f64::consts::PI;

use spectral_strip::{Grid1D, ModalField, Samples, StripField};

use crate::error::{EulerError, Result};
use crate::term::{EulerTerm, OUTER_LEVELS};

/// Forcing of one outer level: `f` drives x-momentum, `g` y-momentum.
#[derive(Debug, Clone)]
pub struct EulerForcing {
    pub level: i32,
    pub f: StripField,
    pub g: StripField,
}

/// `-(u_a d_x q_b + v_a d_y q_b)` accumulated into `out`.
fn accumulate(out: &mut Samples, ua: &Samples, va: &Samples, qb: &StripField) {
    let qx = qb.ddx().samples();
    let qy = qb.dds_high(1).samples();
    for j in 0..out.data.len() {
        out.data[j] -= ua.data[j] * qx.data[j] + va.data[j] * qy.data[j];
    }
}

/// Sum over `a + b = level` (`a, b >= 1`) of the convective products of the
/// non-Couette outer terms. Products are formed on the physical grid.
pub fn euler_forcing(level: i32, nx: usize, grid: &Grid1D, terms: &[EulerTerm]) -> Result<EulerForcing> {
    let find = |l: i32| terms.iter().find(|t| t.level.0 == l);
    let mut f = Samples::zeros(nx, grid.len());
    let mut g = Samples::zeros(nx, grid.len());
    for &a in OUTER_LEVELS.iter().filter(|&&a| a >= 1 && a < level) {
        let b = level - a;
        if !OUTER_LEVELS.contains(&b) || b < 1 {
            continue;
        }
        let (ta, tb) = match (find(a), find(b)) {
            (Some(ta), Some(tb)) => (ta, tb),
            (None, _) => return Err(EulerError::HierarchyGap { level: a }),
            (_, None) => return Err(EulerError::HierarchyGap { level: b }),
        };
        let (ua, va) = (ta.u.samples(), ta.v.samples());
        accumulate(&mut f, &ua, &va, &tb.u);
        accumulate(&mut g, &ua, &va, &tb.v);
    }
    Ok(EulerForcing {
        level,
        f: ModalField::from_samples(&f, grid)?,
        g: ModalField::from_samples(&g, grid)?,
    })
}

/// `max_y |2 pi mean_x(v u_y)|`: vanishes when `v` is harmonic and `u` its
/// continuity partner, which makes the x-mean of the next forcing vanish.
pub fn check_shear_selection(u: &StripField, v: &StripField) -> f64 {
    let vs = v.samples();
    let uy = u.dds_high(1).samples();
    let nx = vs.nx;
    (0..vs.ns)
        .map(|k| {
            let m = (0..nx).map(|i| vs.at(i, k) * uy.at(i, k)).sum::<f64>() / nx as f64;
            (2.0 * PI * m).abs()
        })
        .fold(0.0, f64::max)
}
