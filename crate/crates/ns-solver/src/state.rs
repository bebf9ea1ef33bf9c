use spectral_strip::{interp, Grid1D, Samples, StripField};

use crate::discrete::{Layout, Unknowns};
use crate::error::Result;

/// Residual level below which Newton steps must contract quadratically.
pub const QUADRATIC_WINDOW: f64 = 1e-4;
/// Attainable residual level in double precision for the default grids.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Convergence record of a solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NewtonLog {
    /// Residual norm before each step and after the last one.
    pub residuals: Vec<f64>,
    pub step_norms: Vec<f64>,
    /// Accepted damping factor of each step.
    pub damping: Vec<f64>,
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl NewtonLog {
    pub fn iterations(&self) -> usize {
        self.step_norms.len()
    }

    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::INFINITY)
    }

    /// Checks `r_{k+1} <= 10 r_k^2` for every step starting below `1e-4`.
    /// Residuals cannot drop below round-off, so bounds under
    /// [`ROUNDOFF_FLOOR`] are raised to it.
    pub fn quadratic_tail(&self) -> bool {
        self.residuals
            .windows(2)
            .filter(|w| w[0] < QUADRATIC_WINDOW)
            .all(|w| w[1] <= (10.0 * w[0] * w[0]).max(ROUNDOFF_FLOOR))
    }
}

/// Velocity and pressure on the strip. `p` holds node values interpolated from
/// the half-node unknowns in `p_half`.
#[derive(Debug, Clone)]
pub struct NSState {
    pub eps: f64,
    pub u: StripField,
    pub v: StripField,
    pub p: StripField,
    pub p_half: Samples,
    pub log: NewtonLog,
}

/// Node values from half-node values, linearly extrapolated at the walls.
pub fn half_to_nodes(p_half: &Samples) -> Samples {
    let (nx, n) = (p_half.nx, p_half.ns);
    let mut out = Samples::zeros(nx, n + 1);
    for i in 0..nx {
        for k in 1..n {
            out.row_mut(k)[i] = 0.5 * (p_half.at(i, k - 1) + p_half.at(i, k));
        }
        out.row_mut(0)[i] = 1.5 * p_half.at(i, 0) - 0.5 * p_half.at(i, 1);
        out.row_mut(n)[i] = 1.5 * p_half.at(i, n - 1) - 0.5 * p_half.at(i, n - 2);
    }
    out
}

/// Samples of `f` on `grid`, cubic in y when the grids differ.
pub fn resample(f: &StripField, grid: &Grid1D) -> Samples {
    let s = f.samples();
    if f.grid().same_as(grid) {
        return s;
    }
    let src = f.grid();
    let mut out = Samples::zeros(s.nx, grid.len());
    for i in 0..s.nx {
        let col = s.column(i);
        for (k, &y) in grid.nodes().iter().enumerate() {
            let y = y.clamp(src.first(), src.last());
            out.row_mut(k)[i] = interp::cubic_at(&col, src.first(), src.spacing(), y).unwrap_or(0.0);
        }
    }
    out
}

/// Half-node averages of node values.
pub fn nodes_to_half(p: &Samples) -> Samples {
    let mut out = Samples::zeros(p.nx, p.ns - 1);
    for k in 0..p.ns - 1 {
        for i in 0..p.nx {
            out.row_mut(k)[i] = 0.5 * (p.at(i, k) + p.at(i, k + 1));
        }
    }
    out
}

impl NSState {
    pub(crate) fn from_unknowns(eps: f64, x: Unknowns, log: NewtonLog) -> Result<Self> {
        let grid = Grid1D::interval(x.u.ns - 1)?;
        Ok(Self {
            eps,
            u: StripField::from_samples(&x.u, &grid)?,
            v: StripField::from_samples(&x.v, &grid)?,
            p: StripField::from_samples(&half_to_nodes(&x.p_half), &grid)?,
            p_half: x.p_half,
            log,
        })
    }

    pub fn nx(&self) -> usize {
        self.u.nx()
    }

    /// Number of y-intervals.
    pub fn ny(&self) -> usize {
        self.u.grid().len() - 1
    }

    pub fn grid(&self) -> &Grid1D {
        self.u.grid()
    }

    pub(crate) fn unknowns(&self) -> Unknowns {
        Unknowns { u: self.u.samples(), v: self.v.samples(), p_half: self.p_half.clone() }
    }

    pub fn converged(&self) -> bool {
        self.log.converged
    }

    /// Discrete divergence at the half nodes.
    pub fn divergence(&self) -> Result<Samples> {
        let layout = Layout::new(self.nx(), self.ny())?;
        Ok(layout.divergence(&self.unknowns()))
    }
}
