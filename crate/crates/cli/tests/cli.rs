use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn minitube(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minitube"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn minitube")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn analyze_catenoid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cat.json", r#"{"R": 2, "g": "z", "flux_constant": 1}"#);
    let out = minitube(
        &["analyze", &cfg, "--sections", "-0.3,0,0.5", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let r = &v["report"];
    let q = r["flux"].as_array().unwrap();
    assert!(num(&q[0]).abs() < 1e-10 && num(&q[1]).abs() < 1e-10);
    assert!((num(&q[2]) - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    assert!(num(&r["tilt"]["alpha"]).abs() < 1e-12);
    assert_eq!(r["bound"], "inf");
    assert_eq!(r["verdict"], "satisfied");
    assert_eq!(r["sections"].as_array().unwrap().len(), 3);
    let lt = num(&r["lifetime"]["measured"]);
    assert!((lt - 2.0 * 2f64.ln()).abs() < 1e-6);
}

#[test]
fn analyze_is_deterministic_and_spec_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m.json", r#"{"R": 1.5, "g": "(z+0.4)/(1-0.4*z)", "c": 1, "N": 256}"#);
    let a = minitube(&["analyze", &cfg], dir.path());
    let b = minitube(&["analyze", &cfg], dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let echoed = serde_json::to_string(&v["report"]["spec"]).unwrap();
    let again = minitube::io::TubeSpec::from_json(&echoed).unwrap();
    let orig = minitube::io::TubeSpec::from_json(&fs::read_to_string(dir.path().join(&cfg)).unwrap()).unwrap();
    assert_eq!(again, orig);
}

#[test]
fn analyze_non_tube_exits_2_with_defect() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"R": 2, "g": "z+2", "c": 1}"#);
    let out = minitube(&["analyze", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = v["report"]["period_defect"].as_array().unwrap();
    assert!(num(&d[0]).abs() < 1e-9);
    assert!((num(&d[1]) + 7.853982).abs() < 1e-6);
    assert!(num(&d[2]).abs() < 1e-9);
    assert_eq!(v["report"]["verdict"], "not_a_tube");
}

#[test]
fn malformed_and_invalid_configs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mal.json", "{\"R\": 2,\n \"g\": }");
    let out = minitube(&["analyze", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("column"), "{err}");

    for bad in [
        r#"{"R": 2, "g": "z"}"#,
        r#"{"R": 2, "g": "z", "c": 1, "f": "1/z^2"}"#,
        r#"{"R": 0.5, "g": "z", "c": 1}"#,
        r#"{"R": 2, "g": "z", "c": 1, "extra": 3}"#,
        r#"{"R": 2, "g": "z+*", "c": 1}"#,
    ] {
        let cfg = write(dir.path(), "bad.json", bad);
        assert_eq!(minitube(&["analyze", &cfg], dir.path()).status.code(), Some(1), "{bad}");
    }
    assert_eq!(minitube(&["analyze", "missing.json"], dir.path()).status.code(), Some(1));
}

#[test]
fn sweep_bound_table() {
    let dir = tempfile::tempdir().unwrap();
    let lam = std::f64::consts::PI.sinh().to_string();
    let out = minitube(
        &["sweep", "bound", "--lambda-min", "1", "--lambda-max", &lam, "--steps", "2", "--out", "b.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,lnR0,modD");
    let row: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((row[1] - 11.197980682).abs() < 1e-8);
    assert!((row[2] - 3.564427956).abs() < 1e-8);
    let row: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((row[1] - std::f64::consts::PI).abs() < 1e-10);
    assert!(!dir.path().join("b.csv.failures.csv").exists());
}

#[test]
fn sweep_bound_logs_failed_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = minitube(
        &["sweep", "bound", "--lambda-min", "0", "--lambda-max", "2", "--steps", "3", "--out", "b.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    let side = fs::read_to_string(dir.path().join("b.csv.failures.csv")).unwrap();
    assert!(side.starts_with("lambda,error\n0,"), "{side}");
    let empty = minitube(
        &["sweep", "bound", "--lambda-min", "1", "--lambda-max", "2", "--steps", "0", "--out", "e.csv"],
        dir.path(),
    );
    assert_eq!(empty.status.code(), Some(1));
}

#[test]
fn sweep_conjecture_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let out = minitube(
        &["sweep", "conjecture", "--q-min", "0.05", "--q-max", "0.6", "--steps", "6", "--out", "c.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,R,lambda,lnR,lnR0,ratio"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|s| s.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert!(r[5] <= 1.0 && r[5] > 0.0, "{r:?}");
    }
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
}

#[test]
fn modulus_of_annulus() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "a.json", r#"{"kind": "annulus", "ratio": 3}"#);
    let out = minitube(&["modulus", "--domain", &d, "--h", "0.05"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let exact = 2.0 * std::f64::consts::PI / 3f64.ln();
    assert!((num(&v["report"]["value"]) - exact).abs() / exact < 1e-3);
    let bad = write(dir.path(), "b.json", r#"{"kind": "annulus", "ratio": 3, "x": 1}"#);
    let _ = minitube(&["modulus", "--domain", &bad, "--h", "0.05"], dir.path());
    let bad = write(dir.path(), "c.json", r#"{"kind": "disk"}"#);
    assert_eq!(minitube(&["modulus", "--domain", &bad, "--h", "0.05"], dir.path()).status.code(), Some(1));
}
