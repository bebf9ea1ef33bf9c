//! Cutoff gluing the two boundary layers: `chi = 1` near `y = 0`, `0` near `y = 1`.

/// Degree-7 smoothstep falling from 1 to 0 across `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub start: f64,
    pub end: f64,
}

impl Default for Cutoff {
    fn default() -> Self {
        Self { start: 0.25, end: 0.75 }
    }
}

impl Cutoff {
    fn t(&self, y: f64) -> Option<f64> {
        if y <= self.start || y >= self.end {
            None
        } else {
            Some((y - self.start) / (self.end - self.start))
        }
    }

    pub fn value(&self, y: f64) -> f64 {
        match self.t(y) {
            None if y <= self.start => 1.0,
            None => 0.0,
            Some(t) => 1.0 - t.powi(4) * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t.powi(3)),
        }
    }

    pub fn derivative(&self, y: f64) -> f64 {
        let w = self.end - self.start;
        self.t(y).map_or(0.0, |t| -140.0 * (t * (1.0 - t)).powi(3) / w)
    }

    pub fn second_derivative(&self, y: f64) -> f64 {
        let w = self.end - self.start;
        self.t(y).map_or(0.0, |t| -420.0 * (t * (1.0 - t)).powi(2) * (1.0 - 2.0 * t) / (w * w))
    }

    /// `(w, w', w'')` for `w = chi^k` (`lower`) or `w = (1 - chi)^k`.
    pub fn power(&self, y: f64, k: i32, lower: bool) -> (f64, f64, f64) {
        let (c, d1, d2) = if lower {
            (self.value(y), self.derivative(y), self.second_derivative(y))
        } else {
            (1.0 - self.value(y), -self.derivative(y), -self.second_derivative(y))
        };
        let kf = k as f64;
        let w = c.powi(k);
        let w1 = kf * c.powi(k - 1) * d1;
        let w2 = kf * (kf - 1.0) * c.powi((k - 2).max(0)) * d1 * d1 + kf * c.powi(k - 1) * d2;
        (w, w1, w2)
    }
}
