use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use vvlab::dump::FieldDump;
use vvlab::verify::batchelor_closed_form;
use vvlab::{cmd_expand, cmd_solve, cmd_sweep, cmd_verify, fit_rate, run_verify, Fault, RunConfig, Suite};

fn config(delta: f64) -> RunConfig {
    RunConfig::new(1.0, delta, vec![(1, 1.0, 0.0)])
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn couette_expansion_is_trivial() {
    let out = tempfile::tempdir().unwrap();
    let m = cmd_expand(&config(0.0), out.path()).unwrap();
    assert!(m.passed && m.trivial, "max correction {}", m.max_correction_abs);
    assert_eq!(m.shear, 1.0);
    assert_eq!(m.far_velocity, 1.0);
}

#[test]
fn expansion_manifest_lists_checked_terms_and_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config(0.1);
    let m = cmd_expand(&cfg, a.path()).unwrap();
    cmd_expand(&cfg, b.path()).unwrap();
    assert!(m.passed);
    let kinds: Vec<(String, i32)> = m.terms.iter().map(|t| (t.kind.clone(), t.level)).collect();
    let want = [("euler", 0), ("euler", 3), ("upper", 0), ("upper", 3), ("lower", 3)];
    assert_eq!(kinds, want.map(|(k, l)| (k.to_string(), l)));
    assert_eq!(m.levels, vec![0, 3]);
    assert_eq!(m.config_hash, cfg.hash());

    assert_eq!(read(&a.path().join("expand/manifest.json")), read(&b.path().join("expand/manifest.json")));
    for t in &m.terms {
        assert_eq!(t.files.len(), 3);
        for f in &t.files {
            let (pa, pb) = (a.path().join("expand").join(f), b.path().join("expand").join(f));
            assert_eq!(read(&pa), read(&pb), "{f}");
            let d = FieldDump::read(&pa).unwrap();
            let grid = m.grids.iter().find(|g| g.name == t.grid).unwrap();
            assert_eq!((d.samples.nx, d.samples.ns), (cfg.grid.nx, grid.points));
            assert_eq!(d.eps, 0.0);
        }
    }
}

#[test]
fn sweep_rates_and_parallel_determinism() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config(0.1);
    let t = cmd_sweep(&cfg, a.path(), 1).unwrap();
    cmd_sweep(&cfg, b.path(), 3).unwrap();
    for f in ["sweep/table.csv", "sweep/table.json"] {
        assert_eq!(read(&a.path().join(f)), read(&b.path().join(f)), "{f}");
    }
    assert!(t.passed, "{:?}", t.checks);
    let eps: Vec<f64> = t.rows.iter().map(|r| r.eps).collect();
    assert_eq!(eps, vec![0.2, 0.1, 0.05]);
    assert!(t.rows.iter().all(|r| r.converged && r.config_hash == cfg.hash()));
    let lead = t.fit("u_leading_inf").unwrap();
    assert!(lead.slope >= 0.8 && lead.r_squared >= 0.95, "{lead:?}");
    let (m0, m1) = (t.fit("u_approx_inf_m0").unwrap(), t.fit("u_approx_inf_m1").unwrap());
    assert!(m1.slope > m0.slope, "{m0:?} {m1:?}");

    let csv = String::from_utf8(read(&a.path().join("sweep/table.csv"))).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("eps,u_leading_inf,v_inf,u_approx_inf_m0"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "2.0000000000000001e-1");
    assert_eq!(first.last().unwrap(), &cfg.hash());
    assert!(a.path().join("sweep/timing.csv").exists());
}

#[test]
fn couette_sweep_skips_degenerate_fits() {
    let out = tempfile::tempdir().unwrap();
    let t = cmd_sweep(&config(0.0), out.path(), 2).unwrap();
    assert!(t.passed);
    for r in &t.rows {
        assert!(r.u_leading_inf < 1e-9 && r.v_inf < 1e-9, "{r:?}");
    }
    let f = t.fits.iter().find(|f| f.column == "u_leading_inf").unwrap();
    assert!(f.fit.is_none() && f.note.as_deref().unwrap().contains("degenerate"));
}

#[test]
fn solve_writes_states_and_checks() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = config(0.1);
    cfg.expansion.epsilons = vec![0.1];
    let m = cmd_solve(&cfg, out.path(), 1).unwrap();
    assert!(m.passed, "{:?}", m.runs);
    let r = &m.runs[0];
    assert!(r.iterations <= 6 && r.residuals.last().unwrap() < &1e-10);
    let u = FieldDump::read(&out.path().join("solve").join(&r.files[0])).unwrap();
    assert_eq!((u.name.as_str(), u.eps, u.samples.nx, u.samples.ns), ("ns_0_u", 0.1, 32, 257));
    // top wall row carries the wall data
    let wall = cfg.spec().wall_samples(32);
    assert!(u.samples.row(256).iter().zip(&wall).all(|(a, b)| (a - b).abs() < 1e-12));
}

#[test]
fn verify_passes_and_faults_are_caught() {
    let mut cfg = config(0.1);
    cfg.verify.samples = 20;
    cfg.verify.deltas = vec![0.1];
    let clean = run_verify(&cfg, None).unwrap();
    assert!(clean.passed, "{clean:?}");
    for s in Suite::ALL {
        let r = run_verify(&cfg, Some(Fault { suite: s, seed: 99 })).unwrap();
        assert!(!r.passed);
        for rep in &r.suites {
            assert_eq!(rep.passed, rep.name != s.name(), "fault in {} shows in {}", s.name(), rep.name);
        }
    }
}

#[test]
fn verify_report_matches_documented_schema() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = config(0.1);
    cfg.verify.samples = 5;
    cfg.verify.deltas = vec![0.1];
    let r = cmd_verify(&cfg, out.path(), None).unwrap();
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/verify_report.schema.json");
    let schema: serde_json::Value = serde_json::from_slice(&read(&schema_path)).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&read(&out.path().join("verify/report.json"))).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    assert!(validator.is_valid(&report));
    assert_eq!(serde_json::from_value::<vvlab::VerifyReport>(report).unwrap(), r);
    let mut broken = serde_json::to_value(&r).unwrap();
    broken["suites"][0]["entries"][0]["extra"] = serde_json::json!(1);
    assert!(!validator.is_valid(&broken));
}

#[test]
fn batchelor_closed_form_with_mean_and_sine_modes() {
    let cfg = RunConfig::new(1.0, 0.2, vec![(0, 0.5, 0.0), (2, 0.3, 0.4)]);
    let want = (1.1f64 * 1.1 + 0.5 * 0.04 * 0.25).sqrt();
    assert!((batchelor_closed_form(&cfg) - want).abs() < 1e-15);
}

fn vvlab(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_vvlab")).args(args).output().unwrap().status.code().unwrap()
}

#[test]
fn exit_codes_follow_checks() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "[problem]\nalpha = 1.0\ndelta = 0.1\nforcing = [[1, 1.0, 0.0]]\n").unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let g = good.to_str().unwrap();
    assert_eq!(vvlab(&["expand", "--config", g, "--out", out, "--order", "0"]), 0);
    assert!(dir.path().join("out/expand/manifest.json").exists());
    assert_eq!(vvlab(&["solve", "--config", g, "--out", out, "--epsilon", "0.2,0.1", "--jobs", "2"]), 0);

    // one Newton step is not enough: the solve reports failure
    let strict = dir.path().join("strict.toml");
    std::fs::write(&strict, "[problem]\nalpha = 1.0\ndelta = 0.2\nforcing = [[1, 1.0, 0.0]]\n[solver]\nnewton_max_iterations = 1\n").unwrap();
    assert_eq!(vvlab(&["solve", "--config", strict.to_str().unwrap(), "--out", out, "--epsilon", "0.1"]), 1);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[problem]\nalpha = 1.0\ndelta = 0.1\nforcing = [[1, 1.0, 0.0]]\n[expansion]\nepsilons = [1.5]\n").unwrap();
    assert_eq!(vvlab(&["expand", "--config", bad.to_str().unwrap(), "--out", out]), 2);
    assert_eq!(vvlab(&["expand", "--config", g, "--out", out, "--epsilon", "0.05,0.1"]), 2);
    assert_eq!(vvlab(&["expand", "--config", "/nonexistent.toml"]), 2);
}

proptest! {
    #[test]
    fn fitted_slope_recovers_power_law(p in 0.2f64..4.0, c in 0.01f64..100.0) {
        let eps = [0.3, 0.15, 0.08, 0.04];
        let err: Vec<f64> = eps.iter().map(|e: &f64| c * e.powf(p)).collect();
        let f = fit_rate(&eps, &err).unwrap();
        prop_assert!((f.slope - p).abs() < 1e-10);
        prop_assert!((f.intercept - c.ln()).abs() < 1e-9);
        prop_assert!((f.r_squared - 1.0).abs() < 1e-12);
    }
}
