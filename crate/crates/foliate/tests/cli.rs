use std::fs;
use std::path::Path;

use foliate::cli::{execute, main_with_args, Cli, Command, RunConfig, Status};
use serde_json::Value;

fn run_with(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> i32 {
    let cfg = dir.join(format!("{cmd}.json"));
    fs::write(&cfg, config).unwrap();
    let out = dir.join(cmd);
    let mut args = vec!["foliate", cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    main_with_args(args)
}

fn summary(dir: &Path, cmd: &str) -> Value {
    let text = fs::read_to_string(dir.join(cmd).join(format!("{cmd}_summary.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Perron ray of B(1) by plain power iteration.
fn power_iteration() -> [f64; 3] {
    let mut v = [1.0, 1.0, 1.0];
    for _ in 0..500 {
        let n = [v[0] + v[1] + v[2], v[0], v[1]];
        v = [n[0] / n[2], n[1] / n[2], 1.0];
    }
    v
}

#[test]
fn widths_constant_sequence_recovers_perron_ray() {
    let dir = tempfile::tempdir().unwrap();
    let code = run_with(dir.path(), "widths", r#"{"ks": {"constant": 1, "n": 60}, "depth": 58}"#, &[]);
    assert_eq!(code, 0);
    let s = summary(dir.path(), "widths");
    let want = power_iteration();
    for i in 0..3 {
        let b = s["w0"][i].as_array().unwrap();
        let mid = (b[0].as_f64().unwrap() + b[1].as_f64().unwrap()) / 2.0;
        assert!((mid - want[i]).abs() < 1e-12 * want[i]);
        assert!(s["verified_digits"][i].as_u64().unwrap() >= 12);
    }
    assert_eq!(s["w1_gt_w2_plus_w3"], Value::Bool(true));
}

#[test]
fn widths_doubling_and_accuracy_failure() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_with(dir.path(), "widths", r#"{"ks": {"doubling": {"k0": 2}}, "depth": 24}"#, &[]), 0);
    let s = summary(dir.path(), "widths");
    assert_eq!(s["w1_gt_w2_plus_w3"], Value::Bool(true));
    assert_eq!(s["w2_gt_w3"], Value::Bool(true));
    let csv = fs::read_to_string(dir.path().join("widths/widths.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 25);

    assert_eq!(run_with(dir.path(), "widths", r#"{"depth": 6, "tolerance": 1e-30}"#, &[]), 2);
    let s = summary(dir.path(), "widths");
    assert!(s["achieved_diameter"].as_f64().unwrap() > 1e-30);
    assert_eq!(s["status"], "accuracy");
}

#[test]
fn rips_reports_certificates_and_machine_steps() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_with(dir.path(), "rips", r#"{"rips_steps": 15, "machine_steps": 5}"#, &[]), 0);
    let s = summary(dir.path(), "rips");
    assert_eq!(s["certificates_hold"], Value::Bool(true));
    assert_eq!(s["isomorphic"], Value::Bool(true));
    let collapses: Vec<u64> = s["collapses"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(collapses, vec![3, 5, 9, 17, 33]);

    assert_eq!(run_with(dir.path(), "rips", r#"{"rips_steps": 0}"#, &[]), 0);
    let echo = fs::read_to_string(dir.path().join("rips/complex_0.txt")).unwrap();
    assert!(echo.contains("B1 width") && echo.contains("B4 width"));
}

#[test]
fn iet_reports_ratio_and_orbit() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_with(dir.path(), "iet", r#"{"orbit_steps": 20000, "bins_per_w1": 50}"#, &[]), 0);
    let s = summary(dir.path(), "iet");
    assert_eq!(s["ratio_within_1e-6"], Value::Bool(true));
    assert_eq!(s["separated"], Value::Bool(true));
    let orbit = fs::read_to_string(dir.path().join("iet/orbit.csv")).unwrap();
    assert!(orbit.lines().any(|l| l == "step,transversal,offset,label"));
    assert_eq!(orbit.lines().filter(|l| !l.starts_with('#')).count(), 20001);
    let freq = fs::read_to_string(dir.path().join("iet/frequencies.csv")).unwrap();
    assert_eq!(freq.lines().filter(|l| !l.starts_with('#')).count(), 10);
}

#[test]
fn iet_rejects_non_summable_sequences() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_with(dir.path(), "iet", r#"{"ks": {"constant": 3}}"#, &[]), 1);
}

#[test]
fn section_is_deterministic_and_stamped() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"levels": {"count": 3}, "steps": 20000, "radius": 60, "polyline": true}"#;
    assert_eq!(run_with(dir.path(), "section", cfg, &["--threads", "1"]), 0);
    let first: Vec<(String, Vec<u8>)> = ["components.csv", "directions.csv", "patch.svg", "polyline.csv"]
        .iter()
        .map(|f| (f.to_string(), fs::read(dir.path().join("section").join(f)).unwrap()))
        .collect();
    assert_eq!(run_with(dir.path(), "section", cfg, &["--threads", "3"]), 0);
    for (name, bytes) in &first {
        assert_eq!(&fs::read(dir.path().join("section").join(name)).unwrap(), bytes, "{name}");
    }
    let s = summary(dir.path(), "section");
    assert_eq!(s["antipodal"], Value::Bool(true));
    assert_eq!(s["components"], 9);
    let hash = s["config_sha256"].as_str().unwrap().to_string();
    let csv = String::from_utf8(first[0].1.clone()).unwrap();
    assert!(csv.contains(&format!("# config_sha256={hash}")));
    assert!(csv.contains("# seed=1"));

    // a different seed changes both the hash and the data
    assert_eq!(run_with(dir.path(), "section", cfg, &["--seed", "5"]), 0);
    let s5 = summary(dir.path(), "section");
    assert_ne!(s5["config_sha256"], s["config_sha256"]);
    assert_eq!(s5["seed"], 5);
}

#[test]
fn section_with_explicit_levels() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"levels": {"list": [5.5, 9.25]}, "steps": 5000, "radius": 40, "per_level": 2, "svg": false}"#;
    assert_eq!(run_with(dir.path(), "section", cfg, &[]), 0);
    let s = summary(dir.path(), "section");
    assert_eq!(s["levels"], serde_json::json!([5.5, 9.25]));
    assert!(!dir.path().join("section/patch.svg").exists());
}

#[test]
fn verify_passes_and_catches_a_broken_table() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_with(dir.path(), "verify", "{}", &[]), 0);
    let broken = r#"{"fault": {"k": 3, "row": 4, "col": 0, "delta": 1}}"#;
    assert_eq!(run_with(dir.path(), "verify", broken, &[]), 4);
    let s = summary(dir.path(), "verify");
    let failed: Vec<&str> = s["failed"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(failed.contains(&"r_affine_in_k"));
    let out_of_range = r#"{"fault": {"k": 11, "row": 0, "col": 0, "delta": 1}}"#;
    assert_eq!(run_with(dir.path(), "verify", out_of_range, &[]), 1);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(main_with_args(["foliate", "bogus"]), 1);
    assert_eq!(main_with_args(["foliate"]), 1);
    assert_eq!(main_with_args(["foliate", "verify", "--threads", "zero"]), 1);
    let out = dir.path().join("v");
    assert_eq!(main_with_args(["foliate", "verify", "--threads", "0", "--out", out.to_str().unwrap()]), 1);
    assert_eq!(run_with(dir.path(), "widths", r#"{"depth": 0}"#, &[]), 1);
    assert_eq!(run_with(dir.path(), "widths", r#"{"unknown_field": 1}"#, &[]), 1);
    let missing = dir.path().join("nope.json");
    assert_eq!(main_with_args(["foliate", "widths", "--config", missing.to_str().unwrap()]), 1);
}

#[test]
fn config_round_trip_and_cli_overrides() {
    let cfg = RunConfig::default();
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    assert_eq!(cfg.hash(), RunConfig::from_json(&text).unwrap().hash());

    let dir = tempfile::tempdir().unwrap();
    let cli = Cli {
        command: Command::Widths,
        config: None,
        out: dir.path().to_path_buf(),
        seed: Some(77),
        jitter: true,
        threads: Some(2),
    };
    let report = execute(&cli).unwrap();
    assert_eq!(report.status, Status::Pass);
    assert_eq!(report.summary["seed"], 77);
    assert!(report.files.contains(&"widths.csv".to_string()));
}
