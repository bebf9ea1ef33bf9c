//! Boundary lift for layer problems with inhomogeneous wall data.

/// Which side of the wall the lift lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftSide {
    /// Upper layer, `s <= 0`.
    Upper,
    /// Lower layer, `s >= 0`.
    Lower,
}

/// Polynomial bump `(1 - |s|)^4 (1 - 6|s|)` supported on `|s| <= 1`.
/// Equals 1 at the wall and integrates to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Homogenizer {
    pub side: LiftSide,
}

impl Homogenizer {
    pub fn upper() -> Self {
        Self { side: LiftSide::Upper }
    }

    pub fn lower() -> Self {
        Self { side: LiftSide::Lower }
    }

    /// Distance into the layer, in `[0, 1]` on the support.
    fn depth(&self, s: f64) -> Option<f64> {
        let r = match self.side {
            LiftSide::Upper => -s,
            LiftSide::Lower => s,
        };
        (0.0..1.0).contains(&r).then_some(r)
    }

    fn sign(&self) -> f64 {
        match self.side {
            LiftSide::Upper => -1.0,
            LiftSide::Lower => 1.0,
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.depth(s).map_or(0.0, |r| (1.0 - r).powi(4) * (1.0 - 6.0 * r))
    }

    pub fn derivative(&self, s: f64) -> f64 {
        // d/dr [(1-r)^4 (1-6r)] = -10 (1-r)^3 (1 - 3r)
        self.depth(s).map_or(0.0, |r| self.sign() * (-10.0) * (1.0 - r).powi(3) * (1.0 - 3.0 * r))
    }

    pub fn second_derivative(&self, s: f64) -> f64 {
        self.depth(s).map_or(0.0, |r| 60.0 * (1.0 - r).powi(2) * (1.0 - 2.0 * r))
    }

    /// Integral from the wall to `s` along the depth, `r (1-r)^5` on the support.
    pub fn integral_from_wall(&self, s: f64) -> f64 {
        match self.depth(s) {
            Some(r) => r * (1.0 - r).powi(5),
            None => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spectral_strip::fd;

    #[test]
    fn wall_value_and_zero_integral() {
        for h in [Homogenizer::upper(), Homogenizer::lower()] {
            assert_eq!(h.value(0.0), 1.0);
            let n = 20000;
            let nodes: Vec<f64> = (0..=n).map(|k| h.sign() * k as f64 / n as f64).collect();
            let vals: Vec<f64> = nodes.iter().map(|&s| h.value(s)).collect();
            assert!(fd::trapz(&vals, 1.0 / n as f64).abs() < 1e-8);
            assert_eq!(h.value(h.sign() * 1.5), 0.0);
        }
    }

    #[test]
    fn derivatives_match_differences() {
        for h in [Homogenizer::upper(), Homogenizer::lower()] {
            for &r in &[0.1, 0.37, 0.8] {
                let s = h.sign() * r;
                let e = 1e-5;
                let d1 = (h.value(s + e) - h.value(s - e)) / (2.0 * e);
                let d2 = (h.value(s + e) - 2.0 * h.value(s) + h.value(s - e)) / (e * e);
                assert!((d1 - h.derivative(s)).abs() < 1e-6);
                assert!((d2 - h.second_derivative(s)).abs() < 1e-3);
                let di = (h.integral_from_wall(s + e) - h.integral_from_wall(s - e)) / (2.0 * e);
                assert!((di * h.sign() - h.value(s)).abs() < 1e-6);
            }
        }
    }
}
