//! Order-by-order momentum defects inside a boundary layer.
//!
//! An outer (Euler) expansion `E` is Taylor-expanded about a wall and a layer
//! expansion `P` lives in a stretched coordinate `s` with `y - y_wall = eps^(k/3) s`.
//! The defect `N(E + P) - N(E)` of the steady Navier-Stokes operator, with
//! viscosity `eps^2`, is collected level by level in thirds of `eps`.

use std::collections::BTreeMap;

use crate::error::{Result, StripError};
use crate::field::Samples;
use crate::series::Series;

/// Wall data of one outer level: `u[i]`, `v[i]` hold physical x-samples of the
/// `i`-th y-derivative at the wall.
#[derive(Debug, Clone, PartialEq)]
pub struct WallTaylor {
    pub level: i32,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

impl WallTaylor {
    /// Outer term with only a wall value for `v` (no u, no higher derivatives).
    pub fn v_only(level: i32, v0: Vec<f64>) -> Self {
        Self { level, u: Vec::new(), v: vec![v0] }
    }
}

/// Stretched coordinate: node values of `s` and the stretch exponent `k`
/// (`y - y_wall = eps^(k/3) s`).
#[derive(Debug, Clone)]
pub struct LayerFrame {
    pub nx: usize,
    pub nodes: Vec<f64>,
    pub spacing: f64,
    pub stretch: i32,
}

/// Layer terms keyed by their physical `eps`-level in thirds.
#[derive(Debug, Clone, Default)]
pub struct LayerTerms {
    pub u: BTreeMap<i32, Samples>,
    pub v: BTreeMap<i32, Samples>,
    pub p: BTreeMap<i32, Samples>,
}

/// Level-collected defects; the y-momentum defect omits the layer pressure.
#[derive(Debug, Clone)]
pub struct LayerDefect {
    pub x_momentum: Series,
    pub y_momentum: Series,
}

fn factorial(i: usize) -> f64 {
    (1..=i).fold(1.0, |a, b| a * b as f64)
}

impl LayerFrame {
    pub fn new(nx: usize, nodes: &[f64], stretch: i32) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(StripError::TooFewNodes { min: 3, got: nodes.len() });
        }
        if !(1..=3).contains(&stretch) {
            return Err(StripError::InvalidArgument(format!("stretch {stretch}")));
        }
        Ok(Self { nx, nodes: nodes.to_vec(), spacing: nodes[1] - nodes[0], stretch })
    }

    fn ns(&self) -> usize {
        self.nodes.len()
    }

    /// `sum_i eps^(level + k i) s^(i - d) / (i - d)! * traces[i]` for `i >= d`, truncated at `max_level`.
    fn taylor(&self, level: i32, traces: &[Vec<f64>], d: usize, max_level: i32) -> Series {
        let mut out = Series::new(self.nx, self.ns());
        for (i, tr) in traces.iter().enumerate().skip(d) {
            let l = level + self.stretch * i as i32;
            if l > max_level {
                break;
            }
            let p = i - d;
            let c = 1.0 / factorial(p);
            let mut s = Samples::zeros(self.nx, self.ns());
            for (k, &sv) in self.nodes.iter().enumerate() {
                let w = c * sv.powi(p as i32);
                for (x, t) in s.row_mut(k).iter_mut().zip(tr) {
                    *x = w * t;
                }
            }
            out.add(l, &s);
        }
        out
    }

    fn outer(&self, euler: &[WallTaylor], v: bool, d: usize, max_level: i32) -> Series {
        let mut out = Series::new(self.nx, self.ns());
        for e in euler {
            let tr = if v { &e.v } else { &e.u };
            out = out.plus(&self.taylor(e.level, tr, d, max_level));
        }
        out
    }

    fn layer(&self, terms: &BTreeMap<i32, Samples>, max_level: i32) -> Series {
        let mut out = Series::new(self.nx, self.ns());
        for (l, s) in terms {
            if *l <= max_level {
                out.add(*l, s);
            }
        }
        out
    }

    /// Collects `N(E + P) - N(E)` through `max_level`.
    pub fn defect(&self, euler: &[WallTaylor], layer: &LayerTerms, max_level: i32) -> LayerDefect {
        let k = self.stretch;
        let h = self.spacing;
        let top = max_level + k;
        let eu = self.outer(euler, false, 0, top);
        let eu_s = self.outer(euler, false, 1, top);
        let ev = self.outer(euler, true, 0, top);
        let ev_s = self.outer(euler, true, 1, top);
        let pu = self.layer(&layer.u, top);
        let pv = self.layer(&layer.v, top);
        let pp = self.layer(&layer.p, top);

        let eu_x = eu.ddx();
        let ev_x = ev.ddx();
        let pu_x = pu.ddx();
        let pv_x = pv.ddx();
        let pu_s = pu.dds(h);
        let pv_s = pv.dds(h);
        // v d/dy = (eps^(-k) v) d/ds
        let evt = ev.shift(-k);
        let pvt = pv.shift(-k);
        let m = max_level;

        let mut x = eu.mul(&pu_x, m);
        x = x.plus(&pu.mul(&eu_x, m));
        x = x.plus(&pu.mul(&pu_x, m));
        x = x.plus(&evt.mul(&pu_s, m));
        x = x.plus(&pvt.mul(&eu_s, m));
        x = x.plus(&pvt.mul(&pu_s, m));
        x = x.plus(&pp.ddx());
        x = x.plus(&pu.dds2(h).shift(6 - 2 * k).scale(-1.0));
        x = x.plus(&pu.ddx2().shift(6).scale(-1.0));

        let mut y = eu.mul(&pv_x, m);
        y = y.plus(&pu.mul(&ev_x, m));
        y = y.plus(&pu.mul(&pv_x, m));
        y = y.plus(&evt.mul(&pv_s, m));
        y = y.plus(&pvt.mul(&ev_s, m));
        y = y.plus(&pvt.mul(&pv_s, m));
        y = y.plus(&pv.dds2(h).shift(6 - 2 * k).scale(-1.0));
        y = y.plus(&pv.ddx2().shift(6).scale(-1.0));

        LayerDefect { x_momentum: x.truncate(m), y_momentum: y.truncate(m) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> LayerFrame {
        let nodes: Vec<f64> = (0..=40).map(|k| -4.0 + 0.1 * k as f64).collect();
        LayerFrame::new(8, &nodes, 3).unwrap()
    }

    #[test]
    fn no_layer_no_defect() {
        let f = frame();
        let e = WallTaylor { level: 0, u: vec![vec![1.0; 8], vec![1.0; 8]], v: vec![vec![0.0; 8]] };
        let d = f.defect(&[e], &LayerTerms::default(), 6);
        assert!(d.x_momentum.is_empty() || d.x_momentum.levels().all(|l| d.x_momentum.coeff(l).max_abs() == 0.0));
    }

    #[test]
    fn couette_transport_of_steady_profile() {
        // u = A + P with P = exp(s) independent of x: only viscous term survives at level 0
        let f = frame();
        let e = WallTaylor { level: 0, u: vec![vec![2.0; 8], vec![2.0; 8]], v: vec![vec![0.0; 8]] };
        let mut t = LayerTerms::default();
        let mut s = Samples::zeros(8, f.nodes.len());
        for (k, z) in f.nodes.iter().enumerate() {
            s.row_mut(k).iter_mut().for_each(|v| *v = z.exp());
        }
        t.u.insert(0, s);
        let d = f.defect(&[e], &t, 3);
        let c = d.x_momentum.coeff(0);
        for k in 1..f.nodes.len() - 1 {
            assert!((c.at(3, k) + f.nodes[k].exp()).abs() < 1e-2 * f.nodes[k].exp());
        }
        assert_eq!(d.x_momentum.coeff(3).max_abs(), 0.0);
    }
}
