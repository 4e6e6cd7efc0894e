use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cnplab(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cnplab"));
    cmd.args(args).env_remove("CNPLAB_OUT_DIR");
    if let Some(dir) = out_env {
        cmd.env("CNPLAB_OUT_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn run_in(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "run",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    cnplab(&args, None)
}

fn report(dir: &Path, stem: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{stem}.report.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn list_names_every_experiment() {
    let out = cnplab(&["list"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "identity-suite",
        "cnp-check",
        "pick",
        "multnorm",
        "corona",
        "containment",
        "approx",
        "mate",
        "counterexample",
        "hyponormal",
        "growth",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
    assert!(text.contains("one_over_1mz"));
}

#[test]
fn shipped_configs_pass() {
    let dir = tempfile::tempdir().unwrap();
    let mut n = 0;
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let out = run_in(&path, dir.path(), &[]);
        assert!(
            out.status.success(),
            "{}: {}{}",
            path.display(),
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
        n += 1;
    }
    assert!(n >= 11);
}

#[test]
fn identity_suite_report_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(&configs().join("identity-suite.json"), dir.path(), &[]);
    assert!(out.status.success());
    let r = report(dir.path(), "identity-suite");
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["experiment"]["experiment"], "identity-suite");
    assert!(r["wall_time_ms"].is_u64());
    let csv = std::fs::read_to_string(dir.path().join("identity-suite.dom_t_star.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("row,col,re,im"));
    let last: Vec<f64> = lines
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(&last[..2], &[1.0, 1.0]);
    assert!((last[2] - 7.0 / 6.0).abs() < 1e-12);
}

#[test]
fn reports_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = configs().join("identity-suite-ball.json");
    assert!(run_in(&cfg, a.path(), &[]).status.success());
    assert!(run_in(&cfg, b.path(), &[]).status.success());
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(
        strip(report(a.path(), "identity-suite-ball")),
        strip(report(b.path(), "identity-suite-ball"))
    );
    for t in ["dom_t", "dom_t_star", "gram_b"] {
        let name = format!("identity-suite-ball.{t}.csv");
        assert_eq!(
            std::fs::read(a.path().join(&name)).unwrap(),
            std::fs::read(b.path().join(&name)).unwrap()
        );
    }
}

#[test]
fn seed_flag_overrides_and_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        &configs().join("identity-suite-ball.json"),
        dir.path(),
        &["--seed", "99"],
    );
    assert!(out.status.success());
    assert_eq!(
        report(dir.path(), "identity-suite-ball")["experiment"]["seed"],
        99
    );
}

#[test]
fn failed_assertion_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    // |a|² + |b|² reaches 5/4 at z = −1, so the column is not contractive.
    let cfg = write_config(
        dir.path(),
        "loose.json",
        r#"{"experiment": "containment", "generator": {"kind": "fejer", "n": 40}, "seed": 0,
            "symbol": "one_over_1mz", "pair": ["one_minus_z_half", {"constant": [0.5, 0]}]}"#,
    );
    let out = run_in(&cfg, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL  column-contractive"));
    assert_eq!(report(dir.path(), "loose")["passed"], Value::Bool(false));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(
        dir.path(),
        "unknown.json",
        r#"{"experiment": "mate", "symbol": "z", "color": 1}"#,
    );
    let out = run_in(&unknown, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("color"));

    let unseeded = write_config(
        dir.path(),
        "unseeded.json",
        r#"{"experiment": "multnorm", "generator": {"kind": "fejer", "n": 10}, "symbol": "z"}"#,
    );
    assert_eq!(run_in(&unseeded, dir.path(), &[]).status.code(), Some(2));
    assert!(run_in(&unseeded, dir.path(), &["--seed", "1"])
        .status
        .success());

    let bad_name = write_config(dir.path(), "bad.json", r#"{"experiment": "nope"}"#);
    assert_eq!(run_in(&bad_name, dir.path(), &[]).status.code(), Some(2));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("mate-zero.json");
    let out = cnplab(&["run", cfg.to_str().unwrap()], Some(dir.path()));
    assert!(out.status.success());
    let r = report(dir.path(), "mate-zero");
    assert_eq!(r["results"]["a0"], serde_json::json!([1.0, 0.0]));
    assert_eq!(r["results"]["b0"], serde_json::json!([0.0, 0.0]));
    assert_eq!(r["results"]["pythagorean_residual"], 0.0);
}

#[test]
fn bergman_probe_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        run_in(&configs().join("cnp-check-bergman.json"), dir.path(), &[])
            .status
            .success()
    );
    let r = report(dir.path(), "cnp-check-bergman");
    assert_eq!(r["results"]["accepted"], Value::Bool(false));
    assert_eq!(r["results"]["reason"], "not-positive");
    assert!((r["results"]["min_eigenvalue"].as_f64().unwrap() + 0.125).abs() < 1e-12);
}
