use std::f64::consts::PI;

use ns_solver::{
    error_norms, manufactured, poisson_defect, sobolev_embedding_check, solve_steady_ns, stokes_solve, stream_vorticity,
    InitialGuess, NsConfig, NsError,
};
use proptest::prelude::*;
use spectral_strip::{Forcing, Grid1D, ProblemSpec, StripField};

/// Frozen embedding constant.
const EMBEDDING_C: f64 = 2.0;

#[test]
fn couette_stream_function_and_vorticity() {
    let alpha = 1.5;
    let cfg = NsConfig { ny: 128, ..NsConfig::default() };
    let s = solve_steady_ns(&ProblemSpec::new(alpha, 0.0, Forcing::cosine()), 0.1, InitialGuess::Couette, &cfg).unwrap();
    let (phi, omega) = stream_vorticity(&s).unwrap();
    let want = StripField::from_fn(cfg.nx, s.grid(), |_, y| alpha * (y * y - 1.0) / 2.0);
    assert!(phi.add(&want, -1.0).unwrap().max_abs() < 1e-12);
    assert!(omega.samples().data.iter().all(|w| (w + alpha).abs() < 1e-10));
    assert!(poisson_defect(&phi, &omega) < 1e-9);
}

#[test]
fn manufactured_stream_function_is_recovered() {
    let mut prev = f64::NAN;
    for ny in [32, 64] {
        let g = Grid1D::interval(ny).unwrap();
        let (f, gv) = manufactured::forcing_fields(0.5, false, 16, &g);
        let s = stokes_solve(0.5, &f, &gv).unwrap();
        let (phi, omega) = stream_vorticity(&s).unwrap();
        let err = phi.add(&StripField::from_fn(16, &g, manufactured::psi), -1.0).unwrap().max_abs();
        assert!(err < 0.02, "{err}");
        if prev.is_finite() {
            assert!((prev / err).log2() > 1.7);
        }
        prev = err;
        // phi(x, 0) is constant in x, phi(x, 1) = 0
        assert!(phi.ddx().samples().row(0).iter().all(|v| v.abs() < 1e-12));
        assert!(phi.trace(ny).iter().all(|v| v.abs() == 0.0));
        assert!(poisson_defect(&phi, &omega) < 0.2);
    }
}

#[test]
fn zero_state_has_zero_diagnostics() {
    let g = Grid1D::interval(32).unwrap();
    let z = StripField::zeros(8, &g);
    let s = stokes_solve(0.5, &z, &z).unwrap();
    let (phi, omega) = stream_vorticity(&s).unwrap();
    assert!(phi.is_zero() && omega.is_zero());
    assert_eq!(sobolev_embedding_check(&z, &z).unwrap(), (0.0, 0.0));
    let e = error_norms(&s, &z, Some((&z, &z))).unwrap();
    assert_eq!(e.u_leading_inf + e.v_inf + e.energy + e.u_composite_inf.unwrap() + e.v_composite_inf.unwrap(), 0.0);
}

#[test]
fn embedding_of_single_mode() {
    let g = Grid1D::interval(512).unwrap();
    let u = StripField::from_fn(16, &g, |x, y| x.sin() * (PI * y).sin());
    let z = StripField::zeros(16, &g);
    let (lhs, rhs) = sobolev_embedding_check(&u, &z).unwrap();
    assert!((lhs - 1.0).abs() < 1e-12);
    let exact = (PI / 2.0).sqrt() * (1.0 + 2.0 * PI);
    assert!((rhs - exact).abs() < 1e-3 * exact, "{rhs} vs {exact}");
    assert!(lhs <= EMBEDDING_C * rhs);
}

#[test]
fn embedding_rejects_wall_data() {
    let g = Grid1D::interval(32).unwrap();
    let u = StripField::from_fn(8, &g, |_, y| y);
    let z = StripField::zeros(8, &g);
    assert!(matches!(sobolev_embedding_check(&u, &z), Err(NsError::NonZeroWall(_))));
}

#[test]
fn error_report_entries_are_consistent() {
    let cfg = NsConfig { ny: 128, ..NsConfig::default() };
    let s = solve_steady_ns(&ProblemSpec::new(1.0, 0.1, Forcing::cosine()), 0.2, InitialGuess::Couette, &cfg).unwrap();
    let lead = StripField::from_fn(cfg.nx, s.grid(), |_, y| y);
    let e = error_norms(&s, &lead, None).unwrap();
    let m = (2.0 * PI).sqrt();
    assert!(e.u_leading_l2 <= m * e.u_leading_inf && e.v_l2 <= m * e.v_inf);
    for v in [e.u_leading_inf, e.v_inf, e.energy, e.weighted.sqrt_y_ux, e.weighted.eps2_second] {
        assert!(v >= 0.0 && v.is_finite());
    }
    assert_eq!(e.kappa_weighted.len(), 2);
    // y^(kappa/2) <= 1, so heavier weights shrink the norm
    assert!(e.kappa_weighted[1].1 <= e.kappa_weighted[0].1);
    assert!((e.kappa_weighted[0].1 - e.u_leading_l2).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn embedding_holds_with_frozen_constant(c in proptest::collection::vec(-1.0f64..1.0, 16)) {
        let g = Grid1D::interval(128).unwrap();
        let field = |off: usize| {
            let c = c.clone();
            StripField::from_fn(16, &g, move |x, y| {
                let b = y * (1.0 - y);
                c[off] * b + c[off + 1] * b * b * 8.0
                    + c[off + 2] * x.cos() * (PI * y).sin()
                    + c[off + 3] * (2.0 * x).sin() * (2.0 * PI * y).sin()
                    + c[off + 4] * (3.0 * x + 1.0).cos() * b * (5.0 * y).cos()
                    + c[off + 5] * (x - 0.3).sin() * (PI * y).sin().powi(3)
                    + c[off + 6] * (4.0 * x).cos() * (3.0 * PI * y).sin()
                    + c[off + 7] * b * y
            })
        };
        let (u, v) = (field(0), field(8));
        let (lhs, rhs) = sobolev_embedding_check(&u, &v).unwrap();
        prop_assert!(lhs <= EMBEDDING_C * rhs, "{} > {} * {}", lhs, EMBEDDING_C, rhs);
    }
}
