use std::process::{Command, Output};

use serde_json::Value;

fn relkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relkin")).args(args).env_remove("RELKIN_TOL").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn perpendicular_table_star_row() {
    let out = relkin(&["thomas", "--beta1", "0.78", "--beta2", "0.78", "--perp", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let star: Vec<f64> = text.lines().find(|l| l.starts_with("star,")).unwrap().split(',').skip(1).map(|x| x.parse().unwrap()).collect();
    let g1inv = (1.0f64 - 0.78 * 0.78).sqrt();
    assert!((star[0] - 0.78).abs() < 1e-12);
    assert!((star[1] - 0.78 * g1inv).abs() < 1e-11);
    assert!((g1inv - 0.625).abs() < 1e-3);
}

#[test]
fn fig2_witness_has_excess() {
    let out = relkin(&["lattice", "--witness", "fig2", "--n", "2", "--box", "41"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(!v["result"]["witness"]["excess"].as_array().unwrap().is_empty());
    assert_eq!(v["result"]["witness"]["orthomodular"], Value::Bool(false));
}

#[test]
fn reports_are_deterministic() {
    let args = ["lie", "--contract", "J,E", "--seed", "7"];
    assert_eq!(relkin(&args).stdout, relkin(&args).stdout);
}

#[test]
fn every_check_carries_its_tolerance() {
    let v = json(&relkin(&["compose", "--beta1", "0.5,0,0", "--beta2", "0,0.6,0.1", "--axis1", "0,0,1", "--angle1", "0.4"]));
    for c in v["checks"].as_array().unwrap() {
        assert!(c["tol"].is_number() && c["value"].is_number());
    }
}

#[test]
fn tolerance_flag_beats_environment() {
    let base = ["compose", "--beta1", "0.5,0,0", "--beta2", "0,0.6,0"];
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_relkin"));
        cmd.args(base).args(extra).env_remove("RELKIN_TOL");
        if let Some(t) = env {
            cmd.env("RELKIN_TOL", t);
        }
        cmd.output().unwrap().status.code()
    };
    assert_eq!(run(&[], None), Some(0));
    assert_eq!(run(&[], Some("1e-30")), Some(1));
    assert_eq!(run(&["--tol", "1e-6"], Some("1e-30")), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(relkin(&["polar", "--matrix", "1,2,3"]).status.code(), Some(2));
    assert_eq!(relkin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(relkin(&["lie", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(relkin(&["compose", "--beta1", "0.9,0.9,0", "--beta2", "0,0,0"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_one() {
    let out = relkin(&["lie", "--contract", "K"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], Value::Bool(false));
}

#[test]
fn region_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, r#"{"diamond": {"p": [-1, 0], "q": [1, 0], "closed": true}}"#).unwrap();
    std::fs::write(&b, r#"{"diamond": {"p": [-3, 0], "q": [3, 0], "closed": true}}"#).unwrap();
    let out = relkin(&["lattice", "--box", "21", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["result"]["regions"]["a_complete"], Value::Bool(true));
    assert!(v["result"]["regions"]["meet"].as_array().unwrap().len() >= 5);
}

#[test]
fn out_directory_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = relkin(&["frame", "--kappa", "0.5", "--c", "2", "--format", "csv", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("frame.csv")).unwrap();
    assert!(text.starts_with("rho,"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn verify_all_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = relkin(&["verify-all", "--seed", "42", "--only", "1,4,5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify-all.json")).unwrap()).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 3);
}
