//! End-to-end runs of the binary: exit codes, outputs and determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stationary")).args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stationary")).current_dir(dir).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn catenoid_analysis_passes() {
    let out = run(&["gallery", "catenoid", "--param", "t=0.3", "--emit", "analyze"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let four_pi = 4.0 * std::f64::consts::PI;
    let exact = r["curvature"]["exact_total_k"].as_f64().unwrap();
    let numeric = r["curvature"]["numeric_total_k"].as_f64().unwrap();
    assert!((exact + four_pi).abs() < 1e-12);
    assert!((numeric + four_pi).abs() <= 1e-6 * four_pi);
    assert_eq!(r["passed"], Value::Bool(true));
}

#[test]
fn case5_analysis_reports_mixed_solutions() {
    let out = run(&["gallery", "case5", "--param", "m=1", "a=-0.5", "b=-0.5", "rho=1", "--emit", "analyze"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let sols = r["regularity"]["search"]["solutions"].as_array().unwrap();
    assert!(!sols.is_empty());
    assert!(sols.iter().all(|s| s["residual"].as_f64().unwrap() <= 1e-9));
    assert_eq!(r["periods"]["passed"], Value::Bool(true));
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["regularity"]);
}

#[test]
fn lemma_a2_reports_positive_margin() {
    let out = run(&["lemma-a2", "--a", "-2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["no_solution"], Value::Bool(true));
    assert!(v["margin"].as_f64().unwrap() > 0.0);
    let out = run(&["lemma-a2", "--a", "-0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lemma_a1_sweep_writes_one_row_per_cell() {
    let out = run(&["lemma-a1", "--m", "1,2", "--t", "0,pi/2", "--a-grid", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], stationary_cli::commands::LEMMA_A1_HEADER);
    assert_eq!(rows.len(), 1 + 2 * 2 * 3);
    for row in &rows[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert!(cols[8].parse::<f64>().unwrap() <= 1e-9);
        assert_eq!(cols[9], "true");
    }
}

#[test]
fn config_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("meeks.toml");
    let out = run(&["gallery", "meeks", "--out", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let a = run(&["analyze", cfg.to_str().unwrap()]);
    let b = run(&["analyze", cfg.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let chained = run(&["gallery", "meeks", "--emit", "analyze"]);
    assert_eq!(json(&a)["config_hash"], json(&chained)["config_hash"]);
    assert_eq!(json(&a)["curvature"], json(&chained)["curvature"]);
    assert!(json(&a)["involution"]["passed"] == true);
}

#[test]
fn config_errors_exit_2_with_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "[domain]\npunctures = [\"inf\"]\n[phi]\nnum = [0, 1]\n[psi]\nnum = [1]\nden = [0]\n[dh]\nnum = [1]\n",
    )
    .unwrap();
    let out = run(&["analyze", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("psi.den"));
    std::fs::write(&cfg, "[domain]\npunctures = [\"inf\"]\n[phi]\nnum = [0, 1]\nbogus = 3\n").unwrap();
    let out = run(&["analyze", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5") && err.contains("bogus"), "{err}");
    let out = run(&["gallery", "enneper", "--param", "c=4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mesh_and_locus_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["gallery", "catenoid", "--out", "cat.toml"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_in(dir.path(), &["mesh", "cat.toml", "--grid", "8x16", "--out", "cat"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("cat.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 8 * 16);
    let obj = std::fs::read_to_string(dir.path().join("cat.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 8 * 16);

    let out = run_in(dir.path(), &["gallery", "case5", "--out", "c5.toml"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_in(dir.path(), &["locus", "c5.toml", "--region", "0.01,10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("re,im,delta\n"));
    assert!(text.lines().count() > 10);
}
