//! Wall data of the strip problem: `u(x,1) = alpha + delta f(x)`.

use std::f64::consts::PI;

use crate::error::{Result, StripError};

/// Trigonometric polynomial `f(x) = sum_n a_n cos(nx) + b_n sin(nx)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Forcing {
    pub terms: Vec<(u32, f64, f64)>,
}

impl Forcing {
    pub fn new(terms: Vec<(u32, f64, f64)>) -> Self {
        Self { terms }
    }

    pub fn cosine() -> Self {
        Self { terms: vec![(1, 1.0, 0.0)] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(n, a, b)| a * (n as f64 * x).cos() + b * (n as f64 * x).sin()).sum()
    }

    pub fn max_mode(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub delta: f64,
    pub forcing: Forcing,
}

impl ProblemSpec {
    pub fn new(alpha: f64, delta: f64, forcing: Forcing) -> Self {
        Self { alpha, delta, forcing }
    }

    pub fn wall_value(&self, x: f64) -> f64 {
        self.alpha + self.delta * self.forcing.eval(x)
    }

    pub fn wall_samples(&self, nx: usize) -> Vec<f64> {
        (0..nx).map(|i| self.wall_value(2.0 * PI * i as f64 / nx as f64)).collect()
    }

    /// Rejects nonpositive `alpha`, negative `delta` and wall data that touches zero.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(StripError::InvalidArgument(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.delta >= 0.0) {
            return Err(StripError::InvalidArgument(format!("delta must be nonnegative, got {}", self.delta)));
        }
        let probe = 64 * (self.forcing.max_mode() as usize + 1);
        let min = self.wall_samples(probe).into_iter().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(StripError::InvalidArgument(format!("wall data alpha + delta f reaches {min}")));
        }
        Ok(())
    }
}
