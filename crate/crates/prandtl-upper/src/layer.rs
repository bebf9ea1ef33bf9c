//! Upper-layer terms and the per-mode integrations that complete them.

use spectral_strip::{fd, Complex64, EpsPower, LayerField, ModalField};

use crate::error::{Result, UpperError};

/// Relative size of far-field content tolerated for "decaying" data.
pub const DECAY_TOL: f64 = 1e-6;
/// Relative spread tolerated on the far plateau.
pub const PLATEAU_TOL: f64 = 1e-8;

/// One order of the upper layer: `u` at `eps^k`, `v` at `eps^(k+1)`, pressure at `eps^(k+1)`.
#[derive(Debug, Clone)]
pub struct UpperLayer {
    pub level: EpsPower,
    pub u: LayerField,
    pub v: LayerField,
    pub p: LayerField,
}

impl UpperLayer {
    /// Far-field constant of the u-component before it was shifted off.
    pub fn far_constant(&self) -> f64 {
        self.u.far_constant
    }

    /// `max |u_x + v_z|` on the layer grid.
    pub fn continuity_defect(&self) -> f64 {
        continuity_defect(&self.u.field, &self.v.field)
    }
}

pub fn continuity_defect(u: &ModalField, v: &ModalField) -> f64 {
    let div = u.ddx().add(&v.dds(), 1.0).expect("same grids");
    div.max_abs()
}

fn far_tail(u: &ModalField) -> f64 {
    let far = u.grid().far_index();
    (1..u.mode_count()).fold(0.0, |m, n| m.max(u.mode_values(n)[far].norm()))
}

/// Integrates `a(s)` from the far node toward the wall; zero at the far node.
fn from_far(a: &[Complex64], h: f64, far_first: bool) -> Vec<Complex64> {
    if far_first {
        fd::cumtrapz(a, h)
    } else {
        fd::cumtrapz_rev(a, h)
    }
}

/// `v = -int_{z_min}^z u_x dz'` (far field pinned to 0), mode by mode.
pub fn v_from_continuity(u: &LayerField) -> Result<LayerField> {
    let f = &u.field;
    let scale = 1.0 + f.max_abs();
    let tail = far_tail(f);
    if tail > DECAY_TOL * scale {
        return Err(UpperError::NotDecaying { what: "u-layer", tail });
    }
    let h = f.grid().spacing();
    let mut v = ModalField::zeros(f.nx(), f.grid()).named(format!("v[{}]", f.name), EpsPower(f.exponent.0 + 3));
    let nyq = f.nx() / 2;
    for n in 1..f.mode_count() {
        if n == nyq {
            continue;
        }
        let ik = Complex64::new(0.0, n as f64);
        let dx: Vec<Complex64> = f.mode_values(n).iter().map(|c| -ik * c).collect();
        v.mode_values_mut(n).copy_from_slice(&from_far(&dx, h, true));
    }
    Ok(LayerField::new(v, 0.0))
}

/// Detects the far plateau of the u-component, records its mean as the far
/// constant and shifts it off. Uses the 10% of nodes nearest the far end.
pub fn extract_far_constant(u: &LayerField) -> Result<(f64, LayerField)> {
    let f = &u.field;
    let len = f.grid().len();
    let span = (len / 10).max(2);
    let far = f.grid().far_index();
    let idx: Vec<usize> = if far == 0 { (0..span).collect() } else { (len - span..len).collect() };
    let mean = f.mean_profile();
    let lo = idx.iter().map(|&k| mean[k]).fold(f64::INFINITY, f64::min);
    let hi = idx.iter().map(|&k| mean[k]).fold(f64::NEG_INFINITY, f64::max);
    let osc = idx
        .iter()
        .flat_map(|&k| (1..f.mode_count()).map(move |n| (n, k)))
        .fold(0.0f64, |m, (n, k)| m.max(f.mode_values(n)[k].norm()));
    let tol = PLATEAU_TOL * (1.0 + f.max_abs());
    let spread = (hi - lo).max(osc);
    if spread > tol {
        return Err(UpperError::NoPlateau { spread, tol });
    }
    let c = idx.iter().map(|&k| mean[k]).sum::<f64>() / idx.len() as f64;
    let mut shifted = f.clone();
    shifted.mode_values_mut(0).iter_mut().for_each(|v| v.re -= c);
    Ok((u.far_constant + c, LayerField::new(shifted, 0.0)))
}

/// `p = int_{z_min}^z g dz'`, far field pinned to 0.
pub fn upper_pressure(g: &ModalField) -> Result<LayerField> {
    let scale = 1.0 + g.max_abs();
    let far = g.grid().far_index();
    let tail = (0..g.mode_count()).fold(0.0f64, |m, n| m.max(g.mode_values(n)[far].norm()));
    if tail > DECAY_TOL * scale {
        return Err(UpperError::NotDecaying { what: "pressure source", tail });
    }
    let h = g.grid().spacing();
    let mut p = ModalField::zeros(g.nx(), g.grid()).named(format!("p[{}]", g.name), g.exponent);
    for n in 0..g.mode_count() {
        let v = from_far(g.mode_values(n), h, far == 0);
        let v: Vec<Complex64> = if far == 0 { v } else { v.into_iter().map(|c| -c).collect() };
        p.mode_values_mut(n).copy_from_slice(&v);
    }
    Ok(LayerField::new(p, 0.0))
}
