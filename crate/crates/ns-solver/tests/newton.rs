use ns_solver::{
    error_norms, manufactured, required_ny, solve_problem, solve_steady_ns, InitialGuess, NsConfig, NsError, NsProblem,
};
use spectral_strip::{Forcing, Grid1D, ProblemSpec, StripField};

fn spec(alpha: f64, delta: f64) -> ProblemSpec {
    ProblemSpec::new(alpha, delta, Forcing::cosine())
}

#[test]
fn couette_is_reproduced_exactly() {
    for alpha in [1.0, 2.5] {
        let cfg = NsConfig::default();
        let s = solve_steady_ns(&spec(alpha, 0.0), 0.1, InitialGuess::Couette, &cfg).unwrap();
        assert!(s.converged() && s.log.iterations() <= 2);
        assert!(s.log.final_residual() < 1e-10);
        let couette = StripField::from_fn(cfg.nx, s.grid(), |_, y| alpha * y);
        assert!(s.u.add(&couette, -1.0).unwrap().max_abs() < 1e-9);
        assert!(s.v.max_abs() < 1e-9);
        let e = error_norms(&s, &couette, None).unwrap();
        assert!(e.u_leading_inf < 1e-9 && e.v_inf < 1e-9 && e.energy < 1e-9);
    }
}

#[test]
fn manufactured_navier_stokes_converges_at_second_order() {
    let eps = 0.5;
    let levels = [32usize, 64, 128];
    let mut errs = Vec::new();
    for ny in levels {
        let g = Grid1D::interval(ny).unwrap();
        let (f, gv) = manufactured::forcing_fields(eps, true, 16, &g);
        let problem = NsProblem {
            eps,
            convection: true,
            bottom: vec![0.0; 16],
            top: vec![0.0; 16],
            f_u: Some(f.samples()),
            g_v: Some(gv.samples()),
        };
        let s = solve_problem(&problem, InitialGuess::Couette, &NsConfig { nx: 16, ny, ..NsConfig::default() }).unwrap();
        assert!(s.converged() && s.log.quadratic_tail(), "{:?}", s.log);
        errs.push(manufactured::errors(&s));
    }
    for w in errs.windows(2) {
        for (a, b) in [(w[0].u, w[1].u), (w[0].v, w[1].v), (w[0].p, w[1].p)] {
            let rate = (a / b).log2();
            assert!((rate - 2.0).abs() <= 0.3, "{errs:?}");
        }
    }
}

#[test]
fn forced_wall_flow_converges_quadratically() {
    for eps in [0.2, 0.1, 0.05] {
        let cfg = NsConfig::default();
        let s = solve_steady_ns(&spec(1.0, 0.1), eps, InitialGuess::Couette, &cfg).unwrap();
        assert!(s.converged(), "{:?}", s.log);
        assert!(s.log.quadratic_tail(), "{:?}", s.log.residuals);
        assert!(s.log.iterations() <= 6);
        assert!(s.divergence().unwrap().max_abs() < 1e-10);
        let last = s.ny();
        let wall = spec(1.0, 0.1).wall_samples(cfg.nx);
        assert!(s.u.trace(last).iter().zip(&wall).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(s.u.trace(0).iter().chain(&s.v.trace(0)).chain(&s.v.trace(last)).all(|v| v.abs() < 1e-12));
        // pressure pin
        assert!(s.p.eval_node(0.0, last).abs() < 1e-12);
        // restarting from the solution needs no step
        let again = solve_steady_ns(&spec(1.0, 0.1), eps, InitialGuess::State(&s), &cfg).unwrap();
        assert!(again.converged() && again.log.iterations() <= 1);
    }
}

#[test]
fn non_convergence_is_reported_with_history() {
    let cfg = NsConfig { max_iterations: 1, ..NsConfig::default() };
    let s = solve_steady_ns(&spec(1.0, 0.2), 0.05, InitialGuess::Couette, &cfg).unwrap();
    assert!(!s.converged());
    assert_eq!(s.log.residuals.len(), 2);
    assert!(s.log.residuals[1] < s.log.residuals[0]);
}

#[test]
fn resolution_rule_and_input_checks() {
    let coarse = NsConfig { ny: 64, ..NsConfig::default() };
    let err = solve_steady_ns(&spec(1.0, 0.1), 0.05, InitialGuess::Couette, &coarse).unwrap_err();
    assert_eq!(err, NsError::UnderResolved { ny: 64, eps: 0.05, needed: required_ny(0.05) });
    let forced = NsConfig { allow_underresolved: true, ..coarse };
    let s = solve_steady_ns(&spec(1.0, 0.1), 0.05, InitialGuess::Couette, &forced).unwrap();
    assert_eq!(s.log.warnings.len(), 1);
    assert!(matches!(
        solve_steady_ns(&spec(1.0, 0.1), 1.0, InitialGuess::Couette, &NsConfig::default()),
        Err(NsError::InvalidEpsilon(_))
    ));
    let g = Grid1D::interval(256).unwrap();
    let wrong = StripField::zeros(16, &g);
    assert!(matches!(
        solve_steady_ns(&spec(1.0, 0.1), 0.1, InitialGuess::Fields { u: &wrong, v: &wrong, p: None }, &NsConfig::default()),
        Err(NsError::Mismatch(_))
    ));
}
