use std::f64::consts::PI;

use prandtl_upper::forcing::weighted_tail;
use prandtl_upper::linear::{residual_max, solve_linear};
use prandtl_upper::{
    leading_layer, solve_upper_linear_bl, upper_forcing, FarCondition, LinearCoefficients, VonMisesConfig,
};
use spectral_strip::fourier::{forward_half, inverse_half};
use spectral_strip::stretched::{LayerTerms, WallTaylor};
use spectral_strip::{fourier, Complex64, Forcing, Grid1D, ProblemSpec, Samples};

const NX: usize = 32;

/// First-order outer flow driven by the trace `top` at `y = 1`, `v = 0` at `y = 0`,
/// by separation of variables. Returns wall traces `(u, u_y, v, v_y)` at `y = 1`.
fn euler_first_order(top: &[f64]) -> [Vec<f64>; 4] {
    let t = forward_half(top);
    let mut out: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); t.len()]);
    for n in 1..t.len() - 1 {
        let k = n as f64;
        let i = Complex64::new(0.0, 1.0);
        let coth = 1.0 / k.tanh();
        out[0][n] = i * t[n] * coth;
        out[1][n] = i * t[n] * k;
        out[2][n] = t[n];
        out[3][n] = t[n] * k * coth;
    }
    out.map(|m| inverse_half(&m, NX))
}

fn broadcast(tr: &[f64], ns: usize) -> Samples {
    let mut s = Samples::zeros(tr.len(), ns);
    for k in 0..ns {
        s.row_mut(k).copy_from_slice(tr);
    }
    s
}

struct Setup {
    zeta: Grid1D,
    far: f64,
    up0: Samples,
    vp3: Samples,
    traces: [Vec<f64>; 4],
}

fn setup(delta: f64) -> Setup {
    let zeta = Grid1D::upper_layer(-40.0, 800).unwrap();
    let spec = ProblemSpec::new(1.0, delta, Forcing::cosine());
    let l = leading_layer(&spec, NX, &zeta, &VonMisesConfig::default()).unwrap();
    let vp3 = l.layer.v.field.samples();
    let top: Vec<f64> = vp3.row(zeta.wall_index()).iter().map(|v| -v).collect();
    Setup { far: l.far_velocity(), up0: l.layer.u.field.samples(), vp3, traces: euler_first_order(&top), zeta }
}

fn terms(s: &Setup) -> (Vec<WallTaylor>, LayerTerms) {
    let ns = s.zeta.len();
    let a = s.far;
    let couette = WallTaylor { level: 0, u: vec![vec![a; NX], vec![a; NX]], v: vec![vec![0.0; NX]; 2] };
    let first = WallTaylor {
        level: 3,
        u: vec![s.traces[0].clone(), s.traces[1].clone()],
        v: vec![s.traces[2].clone(), s.traces[3].clone()],
    };
    let mut t = LayerTerms::default();
    t.u.insert(0, s.up0.clone());
    t.v.insert(3, s.vp3.clone());
    t.p.insert(3, Samples::zeros(NX, ns));
    (vec![couette, first], t)
}

/// Explicit first-order forcing, written out term by term.
fn explicit_first_forcing(s: &Setup) -> Samples {
    let ns = s.zeta.len();
    let h = s.zeta.spacing();
    let ue = broadcast(&s.traces[0], ns);
    let ue_x = broadcast(&fourier::derivative(&s.traces[0], 1), ns);
    let u_z = s.up0.dds(h, 1);
    let u_x = s.up0.ddx(1);
    let mut f = Samples::zeros(NX, ns);
    for (k, &z) in s.zeta.nodes().iter().enumerate() {
        for i in 0..NX {
            f.data[k * NX + i] = (z * u_z.at(i, k) - s.up0.at(i, k)) * ue_x.at(i, k)
                - (ue.at(i, k) + s.far * z) * u_x.at(i, k)
                - s.far * s.vp3.at(i, k);
        }
    }
    f
}

#[test]
fn first_order_forcing_matches_explicit_formula() {
    let s = setup(0.1);
    let (e, t) = terms(&s);
    let f = upper_forcing(3, &s.zeta, NX, &e, &t).unwrap();
    let oracle = explicit_first_forcing(&s);
    let diff = f.f.zip_with(&oracle, |a, b| a - b).max_abs();
    assert!(diff < 1e-12 * (1.0 + oracle.max_abs()), "{diff}");
    assert!(f.f.max_abs() > 1e-3);
    assert!(weighted_tail(&f.f, &s.zeta) < 10.0 * f.f.max_abs());
}

#[test]
fn first_order_layer_is_bounded_and_consistent() {
    let delta = 0.1;
    let s = setup(delta);
    let (e, t) = terms(&s);
    let f = upper_forcing(3, &s.zeta, NX, &e, &t).unwrap();
    let h = s.zeta.spacing();
    let mut drift = s.vp3.clone();
    drift.add_assign(&broadcast(&s.traces[2], s.zeta.len()), 1.0);
    let c = LinearCoefficients::from_profile(s.far, &s.up0, drift, h);
    let wall: Vec<f64> = s.traces[0].iter().map(|v| -v).collect();
    let layer = solve_upper_linear_bl(&s.zeta, &c, &f, &wall).unwrap();
    assert!(layer.far_constant().abs() <= 0.5 * delta, "A1 = {}", layer.far_constant());
    let u = layer.u.field.samples();
    let w = s.zeta.wall_index();
    for i in 0..NX {
        assert!((u.at(i, w) + layer.far_constant() - wall[i]).abs() < 1e-10);
    }
    assert!(layer.v.field.max_mean() < 1e-12);
    assert!(layer.continuity_defect() < 1e-4);
    let mut physical = u.clone();
    physical.data.iter_mut().for_each(|v| *v += layer.far_constant());
    assert!(residual_max(&c, &physical, &f.f, FarCondition::Neumann) < 1e-8);
}

#[test]
fn zero_amplitude_gives_zero_first_order() {
    let s = setup(0.0);
    let (e, t) = terms(&s);
    let f = upper_forcing(3, &s.zeta, NX, &e, &t).unwrap();
    assert!(f.f.max_abs() < 1e-14 && f.g.max_abs() < 1e-14);
    let c = LinearCoefficients::from_profile(s.far, &s.up0, s.vp3.clone(), s.zeta.spacing());
    let layer = solve_upper_linear_bl(&s.zeta, &c, &f, &vec![0.0; NX]).unwrap();
    assert!(layer.u.field.max_abs() < 1e-14);
    assert_eq!(layer.far_constant(), 0.0);
}

#[test]
fn missing_partner_is_a_hierarchy_gap() {
    let s = setup(0.1);
    let (e, mut t) = terms(&s);
    t.v.clear();
    assert!(matches!(
        upper_forcing(3, &s.zeta, NX, &e, &t),
        Err(prandtl_upper::UpperError::HierarchyGap { level: 3 })
    ));
}

/// Manufactured `u* = cos(x) z e^z` on the background `ub = 1 + 0.1 cos(x) e^z`.
fn manufactured_error(intervals: usize) -> f64 {
    let nx = 16;
    let g = Grid1D::upper_layer(-20.0, intervals).unwrap();
    let ns = g.len();
    let mut c = LinearCoefficients {
        spacing: g.spacing(),
        base: Samples::zeros(nx, ns),
        base_x: Samples::zeros(nx, ns),
        base_z: Samples::zeros(nx, ns),
        drift: Samples::zeros(nx, ns),
    };
    let mut f = Samples::zeros(nx, ns);
    let mut exact = Samples::zeros(nx, ns);
    for (k, &z) in g.nodes().iter().enumerate() {
        let ez = z.exp();
        for i in 0..nx {
            let x = 2.0 * PI * i as f64 / nx as f64;
            let (sx, cx) = x.sin_cos();
            let j = k * nx + i;
            c.base.data[j] = 1.0 + 0.1 * cx * ez;
            c.base_x.data[j] = -0.1 * sx * ez;
            c.base_z.data[j] = 0.1 * cx * ez;
            c.drift.data[j] = -0.1 * sx * (1.0 - ez);
            let u = cx * z * ez;
            let ux = -sx * z * ez;
            let uz = cx * (1.0 + z) * ez;
            let uzz = cx * (2.0 + z) * ez;
            let w = sx * (1.0 + (z - 1.0) * ez);
            exact.data[j] = u;
            f.data[j] = c.base.data[j] * ux + u * c.base_x.data[j] + c.drift.data[j] * uz + w * c.base_z.data[j] - uzz;
        }
    }
    let u = solve_linear(&c, &f, &vec![0.0; nx], FarCondition::Neumann).unwrap();
    u.zip_with(&exact, |a, b| a - b).max_abs()
}

#[test]
fn manufactured_solution_second_order() {
    let e: Vec<f64> = [200, 400, 800].iter().map(|&n| manufactured_error(n)).collect();
    let r1 = (e[0] / e[1]).log2();
    let r2 = (e[1] / e[2]).log2();
    assert!((r1 - 2.0).abs() < 0.3 && (r2 - 2.0).abs() < 0.3, "{e:?} rates {r1} {r2}");
}
