use std::f64::consts::PI;

use crate::error::{Result, StripError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    PeriodicX,
    IntervalY,
    /// `zeta in [zeta_min, 0]`, wall at the last node.
    UpperLayer,
    /// `eta in [0, eta_max]`, wall at the first node.
    LowerLayer,
}

/// Uniform one-dimensional grid. Nodes are stored in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    kind: GridKind,
    nodes: Vec<f64>,
    spacing: f64,
}

impl Grid1D {
    pub fn periodic(nx: usize) -> Result<Self> {
        if nx < 4 || nx % 2 != 0 {
            return Err(StripError::BadSampleCount(nx));
        }
        let h = 2.0 * PI / nx as f64;
        Ok(Self { kind: GridKind::PeriodicX, nodes: (0..nx).map(|i| i as f64 * h).collect(), spacing: h })
    }

    /// `intervals + 1` nodes covering `[0, 1]`.
    pub fn interval(intervals: usize) -> Result<Self> {
        Self::uniform(GridKind::IntervalY, 0.0, 1.0, intervals)
    }

    pub fn upper_layer(zeta_min: f64, intervals: usize) -> Result<Self> {
        if !(zeta_min < 0.0) || !zeta_min.is_finite() {
            return Err(StripError::BadBound(zeta_min));
        }
        Self::uniform(GridKind::UpperLayer, zeta_min, 0.0, intervals)
    }

    pub fn lower_layer(eta_max: f64, intervals: usize) -> Result<Self> {
        if !(eta_max > 0.0) || !eta_max.is_finite() {
            return Err(StripError::BadBound(eta_max));
        }
        Self::uniform(GridKind::LowerLayer, 0.0, eta_max, intervals)
    }

    fn uniform(kind: GridKind, a: f64, b: f64, intervals: usize) -> Result<Self> {
        if intervals < 4 {
            return Err(StripError::TooFewNodes { min: 4, got: intervals });
        }
        let h = (b - a) / intervals as f64;
        let mut nodes: Vec<f64> = (0..=intervals).map(|k| a + k as f64 * h).collect();
        nodes[intervals] = b;
        Ok(Self { kind, nodes, spacing: h })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Index of the wall node for layer grids (and `y = 0` for the interval).
    pub fn wall_index(&self) -> usize {
        match self.kind {
            GridKind::UpperLayer => self.len() - 1,
            _ => 0,
        }
    }

    /// Index of the truncated far-field node of a layer grid.
    pub fn far_index(&self) -> usize {
        match self.kind {
            GridKind::UpperLayer => 0,
            _ => self.len() - 1,
        }
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.kind == other.kind && self.len() == other.len() && (self.first() - other.first()).abs() < 1e-14
            && (self.last() - other.last()).abs() < 1e-14
    }

    pub fn check_same(&self, other: &Grid1D) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(StripError::GridMismatch(format!(
                "{:?}[{}] vs {:?}[{}]",
                self.kind,
                self.len(),
                other.kind,
                other.len()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_rejects_odd_and_tiny() {
        assert!(Grid1D::periodic(7).is_err());
        assert!(Grid1D::periodic(2).is_err());
        let g = Grid1D::periodic(8).unwrap();
        assert!((g.spacing() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn interval_has_endpoints() {
        let g = Grid1D::interval(10).unwrap();
        assert_eq!(g.first(), 0.0);
        assert_eq!(g.last(), 1.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn layer_walls() {
        let up = Grid1D::upper_layer(-40.0, 800).unwrap();
        assert_eq!(up.nodes()[up.wall_index()], 0.0);
        let lo = Grid1D::lower_layer(40.0, 800).unwrap();
        assert_eq!(lo.nodes()[lo.wall_index()], 0.0);
        assert!(Grid1D::upper_layer(1.0, 10).is_err());
    }
}
