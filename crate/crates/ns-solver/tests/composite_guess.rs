use std::sync::LazyLock;

use composite::{build_hierarchy, composite, leading_prediction, Cutoff, Hierarchy, HierarchyConfig};
use ns_solver::{error_norms, solve_steady_ns, InitialGuess, NSState, NsConfig};
use spectral_strip::{Forcing, ProblemSpec};

static SPEC: LazyLock<ProblemSpec> = LazyLock::new(|| ProblemSpec::new(1.0, 0.1, Forcing::cosine()));
static HIER: LazyLock<Hierarchy> = LazyLock::new(|| build_hierarchy(&SPEC, &HierarchyConfig::default(), 1).unwrap());

fn solve_from(eps: f64, m: u32) -> (NSState, composite::CompositeSolution) {
    let (c, _) = composite(&HIER, eps, &Cutoff::default(), m).unwrap();
    let s = solve_steady_ns(&SPEC, eps, InitialGuess::Fields { u: &c.u.f, v: &c.v.f, p: Some(&c.p) }, &NsConfig::default()).unwrap();
    (s, c)
}

#[test]
fn composite_guesses_reach_the_same_state() {
    let (s0, _) = solve_from(0.1, 0);
    let (s1, c1) = solve_from(0.1, 1);
    assert!(s0.converged() && s1.converged());
    assert!(s0.log.quadratic_tail() && s1.log.quadratic_tail());
    let d = s0.u.add(&s1.u, -1.0).unwrap().max_abs().max(s0.v.add(&s1.v, -1.0).unwrap().max_abs());
    assert!(d < 1e-9, "{d}");
    // distance of the solution from its m = 1 guess, frozen from a verified run
    let gap = s1.u.add(&c1.u.f, -1.0).unwrap().max_abs();
    assert!((gap - 5.302e-3).abs() < 5e-5, "{gap}");
    assert!(gap < 0.1 * 0.1);
}

#[test]
fn leading_error_scales_with_eps() {
    let mut ratios = Vec::new();
    for eps in [0.2, 0.1, 0.05] {
        let (s, _) = solve_from(eps, 0);
        let lead = leading_prediction(&HIER, eps, s.grid()).unwrap();
        let e = error_norms(&s, &lead, None).unwrap();
        ratios.push(e.u_leading_inf / eps);
        assert!(e.v_inf < 10.0 * eps);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
    assert!(hi < 1.0 && hi / lo < 2.0, "{ratios:?}");
}
