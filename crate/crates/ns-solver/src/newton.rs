//! Damped Newton iteration for the steady system.

use nalgebra::DVector;
use spectral_strip::{Grid1D, ProblemSpec, Samples, StripField};

use crate::discrete::{Layout, NsProblem, Unknowns};
use crate::error::{NsError, Result};
use crate::state::{nodes_to_half, resample, NSState, NewtonLog};

/// Layer width must span this many y-cells.
pub const CELLS_PER_LAYER: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct NsConfig {
    pub nx: usize,
    /// Number of y-intervals.
    pub ny: usize,
    pub tol: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    /// Accept grids below the `ny >= 8/eps` rule (recorded as a warning).
    pub allow_underresolved: bool,
}

impl Default for NsConfig {
    fn default() -> Self {
        Self { nx: 32, ny: 256, tol: 1e-10, max_iterations: 30, max_halvings: 12, allow_underresolved: false }
    }
}

/// Smallest y-interval count that resolves a layer of width `eps`.
pub fn required_ny(eps: f64) -> usize {
    (CELLS_PER_LAYER / eps - 1e-9).ceil() as usize
}

/// Starting point of the iteration.
#[derive(Debug, Clone, Copy)]
pub enum InitialGuess<'a> {
    /// `u` linear in y between the wall data, `v = p = 0`.
    Couette,
    State(&'a NSState),
    /// Node fields on any uniform y-grid of `[0,1]` with matching `nx`, e.g. a composite.
    Fields { u: &'a StripField, v: &'a StripField, p: Option<&'a StripField> },
}

fn start(problem: &NsProblem, guess: InitialGuess, nx: usize, ny: usize) -> Result<Unknowns> {
    let grid = Grid1D::interval(ny)?;
    let mut x = match guess {
        InitialGuess::Couette => {
            let mut u = Samples::zeros(nx, ny + 1);
            for (k, &y) in grid.nodes().iter().enumerate() {
                for i in 0..nx {
                    u.row_mut(k)[i] = (1.0 - y) * problem.bottom[i] + y * problem.top[i];
                }
            }
            Unknowns { u, v: Samples::zeros(nx, ny + 1), p_half: Samples::zeros(nx, ny) }
        }
        InitialGuess::State(s) => {
            let p = resample(&s.p, &grid);
            Unknowns { u: resample(&s.u, &grid), v: resample(&s.v, &grid), p_half: nodes_to_half(&p) }
        }
        InitialGuess::Fields { u, v, p } => {
            if u.nx() != nx || v.nx() != nx {
                return Err(NsError::Mismatch(format!("guess has nx = {}, solver uses {nx}", u.nx())));
            }
            let p_half = match p {
                Some(p) => nodes_to_half(&resample(p, &grid)),
                None => Samples::zeros(nx, ny),
            };
            Unknowns { u: resample(u, &grid), v: resample(v, &grid), p_half }
        }
    };
    if x.u.nx != nx {
        return Err(NsError::Mismatch(format!("guess has nx = {}, solver uses {nx}", x.u.nx)));
    }
    x.u.row_mut(0).copy_from_slice(&problem.bottom);
    x.u.row_mut(ny).copy_from_slice(&problem.top);
    x.v.row_mut(0).iter_mut().for_each(|v| *v = 0.0);
    x.v.row_mut(ny).iter_mut().for_each(|v| *v = 0.0);
    Ok(x)
}

/// Newton iteration for a general forced problem.
pub fn solve_problem(problem: &NsProblem, guess: InitialGuess, cfg: &NsConfig) -> Result<NSState> {
    let (nx, ny) = (cfg.nx, cfg.ny);
    problem.check(nx, ny)?;
    let mut log = NewtonLog::default();
    let needed = required_ny(problem.eps);
    if ny < needed {
        if !cfg.allow_underresolved {
            return Err(NsError::UnderResolved { ny, eps: problem.eps, needed });
        }
        log.warnings.push(format!("{ny} y-intervals under-resolve eps = {} (rule asks for {needed})", problem.eps));
    }
    let layout = Layout::new(nx, ny)?;
    let mut x = layout.pack(&start(problem, guess, nx, ny)?);
    let mut r = layout.residual(problem, &layout.unpack(&x));
    let mut rn = layout.norm(&r);
    log.residuals.push(rn);
    for _ in 0..cfg.max_iterations {
        if rn < cfg.tol {
            break;
        }
        let jac = layout.jacobian(problem, &layout.unpack(&x));
        let rhs: Vec<DVector<f64>> = r.iter().map(|b| -b).collect();
        let dx = jac.solve(&rhs)?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<DVector<f64>> = x.iter().zip(&dx).map(|(a, d)| a + d * lambda).collect();
            let tr = layout.residual(problem, &layout.unpack(&trial));
            let tn = layout.norm(&tr);
            if tn < rn {
                accepted = Some((trial, tr, tn));
                break;
            }
            lambda *= 0.5;
        }
        let Some((trial, tr, tn)) = accepted else {
            log.warnings.push("no damped step reduced the residual".into());
            break;
        };
        log.step_norms.push(layout.norm(&dx) * lambda);
        log.damping.push(lambda);
        log.residuals.push(tn);
        x = trial;
        r = tr;
        rn = tn;
    }
    log.converged = rn < cfg.tol;
    NSState::from_unknowns(problem.eps, layout.unpack(&x), log)
}

/// Steady flow with `u = 0` on `y = 0`, `u = alpha + delta f` on `y = 1`, `v = 0` on both walls.
///
/// A run that does not reach the tolerance still returns its best iterate with
/// `log.converged == false`.
pub fn solve_steady_ns(spec: &ProblemSpec, eps: f64, guess: InitialGuess, cfg: &NsConfig) -> Result<NSState> {
    spec.validate()?;
    let problem = NsProblem {
        eps,
        convection: true,
        bottom: vec![0.0; cfg.nx],
        top: spec.wall_samples(cfg.nx),
        f_u: None,
        g_v: None,
    };
    solve_problem(&problem, guess, cfg)
}
