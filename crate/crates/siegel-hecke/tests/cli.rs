//! The binary end to end: exit codes, formats, reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel-hecke")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("siegel-hecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn invariants_of_det23() {
    let o = run(&["invariants", "--lattice", &data("det23a.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["level"], 23);
    assert_eq!(v["chi"]["2"], 1);
    assert_eq!(v["chi"]["5"], -1);
}

#[test]
fn theta_csv_rows() {
    let o = run(&["theta", "--lattice", &data("e8.json"), "--n", "1", "--bound", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[1..], ["0,1,1", "2,240,1", "4,2160,1"]);
}

#[test]
fn neighbors_of_e8() {
    let o = run(&["neighbors", "--lattice", &data("e8.json"), "--p", "2", "--j", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 135);
}

#[test]
fn ffcheck_passes() {
    let o = run(&["ffcheck", "--p", "3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn verify_exit_codes() {
    let e8 = data("e8.json");
    let base = ["verify", "--lattice", e8.as_str(), "--p", "2", "--n", "1", "--j", "1", "--bound", "6"];
    let ok = run(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["lambda"], "72/1");

    let bad = run(&[&base[..], &["--corrupt-v"]].concat());
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("first mismatch at T ="));

    let tiny = run(&[&base[..], &["--node-budget", "5"]].concat());
    assert_eq!(tiny.status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical() {
    let args = [
        "verify", "--lattice", &data("det23a.json"), "--p", "2", "--n", "1", "--j", "1", "--bound", "8", "--format", "json",
    ]
    .map(String::from);
    let a = scratch("a.json");
    let b = scratch("b.json");
    for out in [&a, &b] {
        let mut v = args.to_vec();
        v.extend(["--out".to_string(), out.display().to_string()]);
        let o = Command::new(env!("CARGO_BIN_EXE_siegel-hecke")).args(&v).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn input_errors() {
    let odd = scratch("odd.json");
    std::fs::write(&odd, r#"{"gram": [[2,1,0],[1,2,1],[0,1,2]]}"#).unwrap();
    let o = run(&["invariants", "--lattice", odd.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("must be even"));

    let odd_diag = scratch("odd_diag.json");
    std::fs::write(&odd_diag, r#"{"gram": [[1,0],[0,2]]}"#).unwrap();
    assert_eq!(run(&["invariants", "--lattice", odd_diag.to_str().unwrap()]).status.code(), Some(3));

    let e8 = data("e8.json");
    assert_eq!(run(&["verify", "--lattice", &e8, "--p", "4", "--n", "1", "--j", "1"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--lattice", &e8, "--p", "2", "--n", "1", "--j", "2"]).status.code(), Some(3));
    assert_eq!(run(&["theta", "--lattice", &data("missing.json")]).status.code(), Some(3));
}
