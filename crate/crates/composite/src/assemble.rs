//! Composite approximation on the strip grid.
//!
//! Every piece carries its own first and second y-derivatives: Euler terms in
//! closed form, layer terms from their native grids (chain rule through the
//! stretch and the cutoff weight). The layer `v` is differentiated through its
//! continuity partner, `v_s = -u_x`, so each layer pair is exactly
//! divergence-free in the assembled fields and the divergence that remains is
//! the cutoff mismatch.
//!
//! Layer `v` terms above the truncation have no outer partner in the sum; their
//! wall values are closed by the harmonic outer pair of that level, lifted to
//! zero tangential velocity at the walls.

use std::f64::consts::PI;

use spectral_strip::interp::cubic_at;
use spectral_strip::{fd, Complex64, Grid1D, ModalField, StripField};

use crate::cutoff::Cutoff;
use crate::error::{CompositeError, Result};
use crate::hierarchy::{levels_up_to, max_level, Hierarchy};
use euler_cascade::OUTER_LEVELS;
use lower_layer::LOWER_STRETCH;
use prandtl_upper::UPPER_STRETCH;

/// Mean of `K` tolerated relative to its size.
pub const MEAN_TOL: f64 = 1e-10;

/// A field with its first two y-derivatives.
#[derive(Debug, Clone)]
pub struct Jet {
    pub f: StripField,
    pub fy: StripField,
    pub fyy: StripField,
}

impl Jet {
    pub fn zeros(nx: usize, grid: &Grid1D) -> Self {
        let z = ModalField::zeros(nx, grid);
        Self { f: z.clone(), fy: z.clone(), fyy: z }
    }

    fn add_scaled(&mut self, other: (&StripField, &StripField, &StripField), c: f64) -> Result<()> {
        self.f = self.f.add(other.0, c)?;
        self.fy = self.fy.add(other.1, c)?;
        self.fyy = self.fyy.add(other.2, c)?;
        Ok(())
    }

    fn zero_nyquist(&mut self) {
        let nyq = self.f.nx() / 2;
        for g in [&mut self.f, &mut self.fy, &mut self.fyy] {
            if nyq < g.mode_count() {
                g.mode_values_mut(nyq).iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNorms {
    pub ru_l2: f64,
    pub rv_l2: f64,
    pub ru_x_l2: f64,
    pub rv_x_l2: f64,
}

impl ResidualNorms {
    pub fn total(&self) -> f64 {
        (self.ru_l2.powi(2) + self.rv_l2.powi(2)).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct CompositeSolution {
    pub eps: f64,
    pub order: u32,
    /// Corrector exponent in thirds of eps.
    pub q: i32,
    pub u: Jet,
    pub v: Jet,
    pub p: StripField,
    pub p_y: StripField,
    pub k: Option<StripField>,
    pub h: Option<StripField>,
    pub residual_u: Option<StripField>,
    pub residual_v: Option<StripField>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxDiagnostics {
    /// Range of `u / (A y)` over `y >= 1e-3`.
    pub min_u_ratio: f64,
    pub max_u_ratio: f64,
    /// `max |u_x| / (delta y)`.
    pub max_ux_ratio: f64,
    /// `max |v| / (eps delta y)`.
    pub max_v_ratio: f64,
}

impl ApproxDiagnostics {
    pub fn within_bounds(&self) -> bool {
        self.min_u_ratio >= 0.5 && self.max_u_ratio <= 2.0 && self.max_v_ratio <= 10.0
    }
}

/// Corrector exponent: the first level above the truncation that the hierarchy would fill.
pub fn corrector_exponent(order: u32) -> Result<i32> {
    let top = max_level(order)?;
    Ok(OUTER_LEVELS.into_iter().find(|&l| l > top).unwrap_or(top + 1))
}

#[derive(Clone, Copy)]
enum Side {
    Upper,
    Lower,
}

struct Frame<'a> {
    eps: f64,
    cutoff: &'a Cutoff,
    side: Side,
    power: i32,
}

impl Frame<'_> {
    fn scale(&self) -> f64 {
        match self.side {
            Side::Upper => self.eps,
            Side::Lower => self.eps.powf(2.0 / 3.0),
        }
    }

    fn coordinate(&self, y: f64) -> f64 {
        match self.side {
            Side::Upper => (y - 1.0) / self.eps,
            Side::Lower => y / self.scale(),
        }
    }

    fn weight(&self, y: f64) -> (f64, f64, f64) {
        self.cutoff.power(y, self.power, matches!(self.side, Side::Lower))
    }
}

/// Adds `c w(y) q(x, s(y))` and its y-derivatives, given `q`, `q_s`, `q_ss` on the layer grid.
fn add_layer_piece(
    out: &mut Jet,
    q: &ModalField,
    qs: &ModalField,
    qss: &ModalField,
    frame: &Frame,
    c: f64,
    what: &'static str,
) -> Result<()> {
    let lg = q.grid();
    let (s0, hs) = (lg.first(), lg.spacing());
    let lam = frame.scale();
    let grid = out.f.grid().clone();
    let modes = q.mode_count().min(out.f.mode_count());
    for (k, &y) in grid.nodes().iter().enumerate() {
        let (w, w1, w2) = frame.weight(y);
        if w == 0.0 && w1 == 0.0 && w2 == 0.0 {
            continue;
        }
        let s = frame.coordinate(y);
        for n in 0..modes {
            let get = |f: &ModalField| cubic_at(f.mode_values(n), s0, hs, s).ok_or(CompositeError::OutOfRange { what, s });
            let (a, b, d) = (get(q)?, get(qs)?, get(qss)?);
            out.f.mode_values_mut(n)[k] += a * (c * w);
            out.fy.mode_values_mut(n)[k] += (a * w1 + b * (w / lam)) * c;
            out.fyy.mode_values_mut(n)[k] += (a * w2 + b * (2.0 * w1 / lam) + d * (w / (lam * lam))) * c;
        }
    }
    Ok(())
}

/// Closure of the layer `v` terms above the truncation.
///
/// The harmonic outer pair with the missing wall data `-T`, `-B` and the pressure
/// of the Couette-linearized balance, plus a compact lift at each wall that
/// cancels its tangential velocity there (with the continuity partner of the
/// lift). Each lift is supported on the cutoff plateau of its own wall, so it
/// stays out of the gluing zone.
#[allow(clippy::too_many_arguments)]
fn add_closure(
    u: &mut Jet,
    v: &mut Jet,
    p: &mut Jet,
    top: &[f64],
    bottom: &[f64],
    shear: f64,
    cutoff: &Cutoff,
    c: f64,
) -> Result<()> {
    let grid = u.f.grid().clone();
    let nx = u.f.nx();
    let neg = |t: &[f64]| t.iter().map(|x| -x).collect::<Vec<_>>();
    let data = euler_cascade::harmonic_data(&neg(top), &neg(bottom))?;
    let d: Vec<(StripField, StripField)> = (0..3).map(|m| data.fields(&grid, m)).collect();
    let mut pp = Jet::zeros(nx, &grid);
    for n in 1..nx / 2 {
        let inv = Complex64::new(0.0, -1.0 / n as f64);
        for (k, &y) in grid.nodes().iter().enumerate() {
            let (u0, u1) = (d[0].0.mode_values(n)[k], d[1].0.mode_values(n)[k]);
            let (v0, v1) = (d[0].1.mode_values(n)[k], d[1].1.mode_values(n)[k]);
            pp.f.mode_values_mut(n)[k] = -(v0 * inv + u0 * y) * shear;
            pp.fy.mode_values_mut(n)[k] = -(v1 * inv + u0 + u1 * y) * shear;
        }
    }
    let mut lu = Jet::zeros(nx, &grid);
    let mut lv = Jet::zeros(nx, &grid);
    let walls = [
        (data.derivative_trace(0, 1.0).0, prandtl_upper::Homogenizer::upper(), 1.0 - cutoff.end, 1.0),
        (data.derivative_trace(0, 0.0).0, prandtl_upper::Homogenizer::lower(), cutoff.start, 0.0),
    ];
    for (trace, kappa, lam, wall) in walls {
        let wm = spectral_strip::fourier::forward_half(&trace);
        // v of the lift: -(wall side) lam U' J(s); U' has modes i n U_n
        let side = if wall > 0.5 { -1.0 } else { 1.0 };
        for (k, &y) in grid.nodes().iter().enumerate() {
            let s = (y - wall) / lam;
            let (k0, k1, k2, j) = (kappa.value(s), kappa.derivative(s), kappa.second_derivative(s), kappa.integral_from_wall(s));
            if k0 == 0.0 && k1 == 0.0 && j == 0.0 {
                continue;
            }
            for n in 1..nx / 2 {
                let un = wm[n];
                let dn = un * Complex64::new(0.0, n as f64);
                lu.f.mode_values_mut(n)[k] -= un * k0;
                lu.fy.mode_values_mut(n)[k] -= un * (k1 / lam);
                lu.fyy.mode_values_mut(n)[k] -= un * (k2 / (lam * lam));
                lv.f.mode_values_mut(n)[k] += dn * (side * lam * j);
                lv.fy.mode_values_mut(n)[k] += dn * k0;
                lv.fyy.mode_values_mut(n)[k] += dn * (k1 / lam);
            }
        }
    }
    u.add_scaled((&d[0].0, &d[1].0, &d[2].0), c)?;
    u.add_scaled((&lu.f, &lu.fy, &lu.fyy), c)?;
    v.add_scaled((&d[0].1, &d[1].1, &d[2].1), c)?;
    v.add_scaled((&lv.f, &lv.fy, &lv.fyy), c)?;
    p.add_scaled((&pp.f, &pp.fy, &pp.fyy), c)
}

/// `u^a = u_e + (1-chi)^2 u_p + chi^2 u_b`, `v^a` likewise, `p^a` with fourth powers.
pub fn assemble_composite(h: &Hierarchy, eps: f64, cutoff: &Cutoff, order: u32) -> Result<CompositeSolution> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CompositeError::InvalidEpsilon(eps));
    }
    if order > h.order {
        return Err(CompositeError::OrderNotBuilt { requested: order, built: h.order });
    }
    let top = max_level(order)?;
    let q = corrector_exponent(order)?;
    let tau = |l: i32| eps.powf(l as f64 / 3.0);
    let nx = h.nx();
    let grid = &h.strip;
    let mut u = Jet::zeros(nx, grid);
    let mut v = Jet::zeros(nx, grid);
    let mut p = Jet::zeros(nx, grid);

    for (&l, e) in h.euler.range(..=top) {
        let d: Vec<_> = (0..3).map(|m| e.derivative_fields(m)).collect();
        u.add_scaled((&d[0].0, &d[1].0, &d[2].0), tau(l))?;
        v.add_scaled((&d[0].1, &d[1].1, &d[2].1), tau(l))?;
        p.add_scaled((&e.p, &e.p.dds_high(1), &e.p.dds_high(2)), tau(l))?;
    }

    let up2 = Frame { eps, cutoff, side: Side::Upper, power: 2 };
    let up4 = Frame { eps, cutoff, side: Side::Upper, power: 4 };
    let lo2 = Frame { eps, cutoff, side: Side::Lower, power: 2 };
    let lo4 = Frame { eps, cutoff, side: Side::Lower, power: 4 };

    let mut closure_top: std::collections::BTreeMap<i32, Vec<f64>> = Default::default();
    let mut closure_bottom: std::collections::BTreeMap<i32, Vec<f64>> = Default::default();

    for (&j, t) in h.upper.range(..=top) {
        let uf = &t.u.field;
        add_layer_piece(&mut u, uf, &uf.dds(), &uf.dds2(), &up2, tau(j), "upper u")?;
        let ux = uf.ddx();
        let vs = ux.scale(-1.0);
        add_layer_piece(&mut v, &t.v.field, &vs, &vs.dds(), &up2, tau(j + UPPER_STRETCH), "upper v")?;
        add_layer_piece(&mut p, &t.p.field, &t.p.field.dds(), &t.p.field.dds2(), &up4, tau(j + UPPER_STRETCH), "upper p")?;
        let l = j + UPPER_STRETCH;
        if l > top {
            closure_top.insert(l, t.v.field.trace(h.zeta.wall_index()));
        }
    }
    for (&j, t) in h.lower.range(..=top) {
        let uf = &t.u.field;
        add_layer_piece(&mut u, uf, &uf.dds(), &uf.dds2(), &lo2, tau(j), "lower u")?;
        let vs = uf.ddx().scale(-1.0);
        add_layer_piece(&mut v, &t.v.field, &vs, &vs.dds(), &lo2, tau(j + LOWER_STRETCH), "lower v")?;
        let l = j + LOWER_STRETCH;
        let mut pf = t.p.field.clone();
        if l > top {
            closure_bottom.insert(l, t.v.field.trace(0));
            let wall = spectral_strip::fourier::forward_half(&t.p_wall);
            for (n, c) in wall.into_iter().enumerate() {
                pf.mode_values_mut(n).iter_mut().for_each(|v| *v += c);
            }
        }
        add_layer_piece(&mut p, &pf, &pf.dds(), &pf.dds2(), &lo4, tau(l), "lower p")?;
    }
    let levels: std::collections::BTreeSet<i32> = closure_top.keys().chain(closure_bottom.keys()).copied().collect();
    for l in levels {
        let z = vec![0.0; nx];
        let t = closure_top.get(&l).unwrap_or(&z);
        let b = closure_bottom.get(&l).unwrap_or(&z);
        add_closure(&mut u, &mut v, &mut p, t, b, h.shear, cutoff, tau(l))?;
    }
    u.zero_nyquist();
    v.zero_nyquist();
    p.zero_nyquist();
    Ok(CompositeSolution {
        eps,
        order,
        q,
        u,
        v,
        p: p.f,
        p_y: p.fy,
        k: None,
        h: None,
        residual_u: None,
        residual_v: None,
    })
}

/// `D_x u + D_y v` of the assembled jets.
pub fn divergence_field(c: &CompositeSolution) -> Result<StripField> {
    Ok(c.u.f.ddx().add(&c.v.fy, 1.0)?)
}

/// `K = -eps^(-q/3) (u_x + v_y)`; zero x-mean and zero wall values are checked.
pub fn mismatch_k(c: &CompositeSolution) -> Result<StripField> {
    let div = divergence_field(c)?;
    let k = div.scale(-c.eps.powf(-c.q as f64 / 3.0));
    let scale = 1.0 + k.max_abs();
    let mean = k.max_mean();
    if mean > MEAN_TOL * scale {
        return Err(CompositeError::NonZeroMean { what: "divergence mismatch K", value: mean });
    }
    Ok(k)
}

/// `h_n = K_n / (i n)` for `n != 0`, mode 0 and the Nyquist mode set to zero.
pub fn corrector_h(k: &StripField) -> Result<StripField> {
    let scale = 1.0 + k.max_abs();
    let mean = k.max_mean();
    if mean > MEAN_TOL * scale {
        return Err(CompositeError::NonZeroMean { what: "K", value: mean });
    }
    let mut h = ModalField::zeros(k.nx(), k.grid()).named("h", k.exponent);
    for n in 1..k.nx() / 2 {
        let inv = Complex64::new(0.0, -1.0 / n as f64);
        let vals: Vec<Complex64> = k.mode_values(n).iter().map(|c| c * inv).collect();
        h.mode_values_mut(n).copy_from_slice(&vals);
    }
    Ok(h)
}

/// Computes `K` and `h` and adds `eps^(q/3) h` to `u^a`.
pub fn apply_corrector(mut c: CompositeSolution) -> Result<CompositeSolution> {
    let k = mismatch_k(&c)?;
    let h = corrector_h(&k)?;
    let w = c.eps.powf(c.q as f64 / 3.0);
    c.u.add_scaled((&h, &h.dds_high(1), &h.dds_high(2)), w)?;
    c.k = Some(k);
    c.h = Some(h);
    Ok(c)
}

fn product(a: &StripField, b: &StripField) -> Result<StripField> {
    let (sa, sb) = (a.samples(), b.samples());
    Ok(ModalField::from_samples(&sa.zip_with(&sb, |x, y| x * y), a.grid())?)
}

/// `int_T int_0^1 f^2`, trapezoid in both directions.
pub fn l2_norm(f: &StripField) -> f64 {
    let s = f.samples();
    let nx = s.nx;
    let rows: Vec<f64> = (0..s.ns).map(|k| s.row(k).iter().map(|v| v * v).sum::<f64>() * 2.0 * PI / nx as f64).collect();
    fd::trapz(&rows, f.grid().spacing()).sqrt()
}

/// Momentum residuals of the steady Navier-Stokes operator with viscosity `eps^2`.
pub fn residual(c: &mut CompositeSolution) -> Result<ResidualNorms> {
    let e2 = c.eps * c.eps;
    let (u, v) = (&c.u, &c.v);
    let ux = u.f.ddx();
    let vx = v.f.ddx();
    let ru = product(&u.f, &ux)?
        .add(&product(&v.f, &u.fy)?, 1.0)?
        .add(&c.p.ddx(), 1.0)?
        .add(&u.f.ddx2(), -e2)?
        .add(&u.fyy, -e2)?;
    let rv = product(&u.f, &vx)?
        .add(&product(&v.f, &v.fy)?, 1.0)?
        .add(&c.p_y, 1.0)?
        .add(&v.f.ddx2(), -e2)?
        .add(&v.fyy, -e2)?;
    let norms = ResidualNorms {
        ru_l2: l2_norm(&ru),
        rv_l2: l2_norm(&rv),
        ru_x_l2: l2_norm(&ru.ddx()),
        rv_x_l2: l2_norm(&rv.ddx()),
    };
    c.residual_u = Some(ru);
    c.residual_v = Some(rv);
    Ok(norms)
}

/// Largest deviation of `u^a(x,1)`, `u^a(x,0)`, `v^a(x,0)`, `v^a(x,1)` from the wall data.
pub fn wall_defect(c: &CompositeSolution, wall: &[f64]) -> f64 {
    let last = c.u.f.grid().len() - 1;
    let top = c.u.f.trace(last);
    let mut m = top.iter().zip(wall).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    for tr in [c.u.f.trace(0), c.v.f.trace(0), c.v.f.trace(last)] {
        m = tr.iter().fold(m, |m, v| m.max(v.abs()));
    }
    m
}

/// Sup ratios of the approximate solution against the Couette profile.
pub fn approx_diagnostics(c: &CompositeSolution, shear: f64, delta: f64) -> ApproxDiagnostics {
    let u = c.u.f.samples();
    let ux = c.u.f.ddx().samples();
    let v = c.v.f.samples();
    let mut d = ApproxDiagnostics { min_u_ratio: f64::INFINITY, max_u_ratio: 0.0, max_ux_ratio: 0.0, max_v_ratio: 0.0 };
    for (k, &y) in c.u.f.grid().nodes().iter().enumerate() {
        if y < 1e-3 {
            continue;
        }
        for i in 0..u.nx {
            let r = u.at(i, k) / (shear * y);
            d.min_u_ratio = d.min_u_ratio.min(r);
            d.max_u_ratio = d.max_u_ratio.max(r);
            if delta > 0.0 {
                d.max_ux_ratio = d.max_ux_ratio.max(ux.at(i, k).abs() / (delta * y));
                d.max_v_ratio = d.max_v_ratio.max(v.at(i, k).abs() / (c.eps * delta * y));
            }
        }
    }
    d
}

/// `A y + u_p^(0)(x, (y-1)/eps)` on `grid`, without cutoff. Beyond the layer grid
/// the profile takes its far constant.
pub fn leading_prediction(h: &Hierarchy, eps: f64, grid: &Grid1D) -> Result<StripField> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CompositeError::InvalidEpsilon(eps));
    }
    let layer = &h.upper[&0].u;
    let (z0, hz) = (h.zeta.first(), h.zeta.spacing());
    let mut out = StripField::zeros(h.nx(), grid);
    for n in 0..layer.field.mode_count() {
        let prof = layer.field.mode_values(n);
        let far = if n == 0 { layer.far_constant } else { 0.0 };
        let vals: Vec<Complex64> = grid
            .nodes()
            .iter()
            .map(|&y| {
                let mean = if n == 0 { h.shear * y } else { 0.0 };
                let z = (y - 1.0) / eps;
                let layer_part = if z < z0 { Complex64::new(far, 0.0) } else { cubic_at(prof, z0, hz, z).unwrap_or(Complex64::new(far, 0.0)) };
                layer_part + mean
            })
            .collect();
        out.mode_values_mut(n).copy_from_slice(&vals);
    }
    Ok(out)
}

/// Assembles, corrects and evaluates the residual in one call.
pub fn composite(h: &Hierarchy, eps: f64, cutoff: &Cutoff, order: u32) -> Result<(CompositeSolution, ResidualNorms)> {
    let c = assemble_composite(h, eps, cutoff, order)?;
    let mut c = apply_corrector(c)?;
    let r = residual(&mut c)?;
    Ok((c, r))
}

/// Levels of the truncated expansion at `order` (for reporting).
pub fn represented_levels(order: u32) -> Result<Vec<i32>> {
    let top = max_level(order)?;
    Ok(std::iter::once(0).chain(levels_up_to(top)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrector_of_single_mode() {
        let g = Grid1D::interval(64).unwrap();
        let k = ModalField::from_fn(16, &g, |x, y| x.sin() * y * (1.0 - y));
        let h = corrector_h(&k).unwrap();
        let want = ModalField::from_fn(16, &g, |x, y| -x.cos() * y * (1.0 - y));
        assert!(h.add(&want, -1.0).unwrap().max_abs() < 1e-14);
        assert!(corrector_h(&ModalField::zeros(16, &g)).unwrap().is_zero());
        let bad = ModalField::from_fn(16, &g, |_, y| y);
        assert!(matches!(corrector_h(&bad), Err(CompositeError::NonZeroMean { .. })));
    }

    #[test]
    fn exponents() {
        assert_eq!(corrector_exponent(0).unwrap(), 3);
        assert_eq!(corrector_exponent(1).unwrap(), 4);
        assert_eq!(corrector_exponent(2).unwrap(), 6);
        assert_eq!(corrector_exponent(3).unwrap(), 7);
        assert_eq!(represented_levels(2).unwrap(), vec![0, 3, 4, 5]);
    }

    #[test]
    fn l2_of_unit_field() {
        let g = Grid1D::interval(32).unwrap();
        let one = ModalField::from_fn(8, &g, |_, _| 1.0);
        assert!((l2_norm(&one) - (2.0 * PI).sqrt()).abs() < 1e-13);
    }
}
