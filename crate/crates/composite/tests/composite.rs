use std::sync::LazyLock;

use composite::{
    apply_corrector, approx_diagnostics, assemble_composite, build_hierarchy, composite, corrector_h,
    divergence_field, wall_defect, CompositeError, Cutoff, Hierarchy, HierarchyConfig, TermKind,
};
use euler_cascade::check_shear_selection;
use proptest::prelude::*;
use spectral_strip::{Forcing, Grid1D, ModalField, ProblemSpec};

fn spec(delta: f64) -> ProblemSpec {
    ProblemSpec::new(1.0, delta, Forcing::cosine())
}

static BASE: LazyLock<Hierarchy> = LazyLock::new(|| build_hierarchy(&spec(0.1), &HierarchyConfig::default(), 2).unwrap());

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[test]
fn couette_data_gives_trivial_hierarchy() {
    let h = build_hierarchy(&spec(0.0), &HierarchyConfig::default(), 2).unwrap();
    assert_eq!(h.shear, 1.0);
    for r in h.reports() {
        if !(r.kind == TermKind::Euler && r.level == 0) {
            assert!(r.max_abs < 1e-14, "{:?} {}", r.kind, r.level);
        }
        assert!(r.passed(), "{r:?}");
    }
    for m in 0..=2 {
        let (c, res) = composite(&h, 0.1, &Cutoff::default(), m).unwrap();
        let want = ModalField::from_fn(32, &h.strip, |_, y| y);
        let (du, v, p) = (c.u.f.add(&want, -1.0).unwrap().max_abs(), c.v.f.max_abs(), c.p.max_abs());
        assert!(du < 1e-13 && v < 1e-13 && p < 1e-13, "{du} {v} {p}");
        let (k, hh) = (c.k.as_ref().unwrap().max_abs(), c.h.as_ref().unwrap().max_abs());
        assert!(k < 1e-12 && hh < 1e-12, "{k} {hh}");
        assert!(res.total() < 1e-12, "{res:?}");
        let d = approx_diagnostics(&c, h.shear, 0.0);
        assert!((d.min_u_ratio - 1.0).abs() < 1e-14 && (d.max_u_ratio - 1.0).abs() < 1e-14);
    }
}

#[test]
fn every_term_passes_its_checks() {
    for delta in [0.05, 0.1, 0.2] {
        let h = build_hierarchy(&spec(delta), &HierarchyConfig::default(), 2).unwrap();
        let reports = h.reports();
        assert_eq!(reports.len(), 4 + 4 + 3);
        for r in reports {
            assert!(r.passed(), "delta {delta}: {r:?}");
        }
    }
}

#[test]
fn shear_selection_of_first_outer_level() {
    let e = &BASE.euler[&3];
    assert!(check_shear_selection(&e.u, &e.v) < 1e-8);
}

#[test]
fn walls_divergence_and_corrector_invariants() {
    let h = &*BASE;
    let wall = h.spec.wall_samples(h.nx());
    let last = h.strip.len() - 1;
    for eps in [0.2, 0.1, 0.05] {
        for m in 0..=2 {
            let (c, _) = composite(h, eps, &Cutoff::default(), m).unwrap();
            assert!(wall_defect(&c, &wall) < 1e-12);
            assert!(divergence_field(&c).unwrap().max_abs() < 1e-10);
            let k = c.k.as_ref().unwrap();
            let hh = c.h.as_ref().unwrap();
            assert!(k.max_mean() < 1e-10 && hh.max_mean() == 0.0);
            for node in [0, last] {
                assert!(max_abs(&k.trace(node)) < 1e-12);
                assert!(max_abs(&hh.trace(node)) < 1e-12);
            }
            // K is the x-derivative of h
            assert!(hh.ddx().add(k, -1.0).unwrap().max_abs() < 1e-12 * (1.0 + k.max_abs()));
        }
    }
}

#[test]
fn residual_improves_with_order() {
    for eps in [0.1, 0.05] {
        let r: Vec<f64> = (0..=2).map(|m| composite(&BASE, eps, &Cutoff::default(), m).unwrap().1.total()).collect();
        assert!(r[1] < r[0] && r[2] < r[1], "eps {eps}: {r:?}");
    }
}

#[test]
fn leading_residual_decays_with_eps() {
    let eps = [0.2, 0.1, 0.05];
    let r: Vec<f64> = eps.iter().map(|&e| composite(&BASE, e, &Cutoff::default(), 0).unwrap().1.total()).collect();
    let x: Vec<f64> = eps.iter().map(|e: &f64| e.ln()).collect();
    let y: Vec<f64> = r.iter().map(|v| v.ln()).collect();
    let (mx, my) = (x.iter().sum::<f64>() / 3.0, y.iter().sum::<f64>() / 3.0);
    let slope = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    assert!(slope > 0.5, "{r:?} slope {slope}");
}

#[test]
fn approximate_solution_stays_near_couette() {
    let (c, _) = composite(&BASE, 0.05, &Cutoff::default(), 2).unwrap();
    let d = approx_diagnostics(&c, BASE.shear, 0.1);
    assert!(d.within_bounds(), "{d:?}");
    assert!(d.max_v_ratio <= 10.0);
}

#[test]
fn leading_composite_is_couette_plus_cut_layer() {
    let h = &*BASE;
    let eps = 0.05;
    let c = assemble_composite(h, eps, &Cutoff::default(), 0).unwrap();
    let chi = Cutoff::default();
    let up = &h.upper[&0].u.field;
    let zeta = &h.zeta;
    let u = c.u.f.samples();
    // above the lower reach of the closure lift only Couette, the cut layer and
    // the eps-weighted closure remain
    let mut worst: f64 = 0.0;
    for (k, &y) in h.strip.nodes().iter().enumerate() {
        let z = (y - 1.0) / eps;
        let w = (1.0 - chi.value(y)).powi(2);
        for i in 0..h.nx() {
            let x = 2.0 * std::f64::consts::PI * i as f64 / h.nx() as f64;
            let layer = if w > 0.0 {
                let col: Vec<f64> = (0..zeta.len()).map(|j| up.eval_node(x, j)).collect();
                spectral_strip::interp::cubic_at(&col, zeta.first(), zeta.spacing(), z).unwrap()
            } else {
                0.0
            };
            worst = worst.max((u.at(i, k) - h.shear * y - w * layer).abs());
        }
    }
    // what is left is the eps-order closure
    assert!(worst < 0.2 * eps, "{worst}");
    assert!(worst > 0.0);
}

#[test]
fn rejects_bad_requests() {
    let h = &*BASE;
    assert!(matches!(assemble_composite(h, 1.5, &Cutoff::default(), 0), Err(CompositeError::InvalidEpsilon(_))));
    assert!(matches!(assemble_composite(h, 0.0, &Cutoff::default(), 0), Err(CompositeError::InvalidEpsilon(_))));
    assert!(matches!(assemble_composite(h, 0.1, &Cutoff::default(), 3), Err(CompositeError::OrderNotBuilt { .. })));
    // the layer grid reaches zeta = -40, too short for eps = 0.01
    assert!(matches!(assemble_composite(h, 0.01, &Cutoff::default(), 0), Err(CompositeError::OutOfRange { .. })));
}

#[test]
fn corrector_requires_mean_free_mismatch() {
    let c = assemble_composite(&BASE, 0.1, &Cutoff::default(), 1).unwrap();
    let mut bad = c.clone();
    bad.v.fy = bad.v.fy.add(&ModalField::from_fn(32, &BASE.strip, |_, y| y), 1.0).unwrap();
    assert!(matches!(apply_corrector(bad), Err(CompositeError::NonZeroMean { .. })));
    assert!(apply_corrector(c).is_ok());
}

fn l2(f: &ModalField) -> f64 {
    composite::l2_norm(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn corrector_is_a_bounded_antiderivative(coeffs in proptest::collection::vec(-1.0f64..1.0, 12)) {
        let g = Grid1D::interval(128).unwrap();
        let k = ModalField::from_fn(16, &g, |x, y| {
            (1..=3).map(|n| {
                let c = &coeffs[4 * (n - 1)..4 * n];
                let prof = (c[0] + c[1] * y) * (std::f64::consts::PI * y * (n as f64)).sin() + c[2] * y * (1.0 - y);
                prof * ((n as f64) * x + c[3]).cos()
            }).sum()
        });
        let h = corrector_h(&k).unwrap();
        prop_assert!(h.ddx().add(&k, -1.0).unwrap().max_abs() < 1e-12);
        prop_assert!(h.max_mean() == 0.0);
        prop_assert!(l2(&h) <= l2(&k) + 1e-14);
        prop_assert!(l2(&h.dds()) <= l2(&k.dds()) + 1e-14);
    }
}

#[test]
fn leading_prediction_matches_composite_near_the_wall() {
    let h = &*BASE;
    let eps = 0.05;
    let pred = composite::leading_prediction(h, eps, &h.strip).unwrap();
    let c = assemble_composite(h, eps, &Cutoff::default(), 0).unwrap();
    let wall = h.spec.wall_samples(h.nx());
    let top = pred.trace(h.strip.len() - 1);
    assert!(top.iter().zip(&wall).all(|(a, b)| (a - b).abs() < 1e-12));
    // agreement up to the eps-order closure where the cutoff is one
    let diff = pred.add(&c.u.f, -1.0).unwrap().samples();
    let k = h.strip.nodes().iter().position(|&y| y >= 0.8).unwrap();
    for kk in k..h.strip.len() {
        assert!(diff.row(kk).iter().all(|d| d.abs() < 0.2 * eps));
    }
    assert!(composite::leading_prediction(h, 0.0, &h.strip).is_err());
}
