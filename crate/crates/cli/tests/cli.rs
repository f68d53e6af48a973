use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn dbrane(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbrane"))
        .args(args)
        .current_dir(dir)
        .env_remove("DBRANE_TOLERANCE")
        .env_remove("DBRANE_SEED")
        .env_remove("DBRANE_DEGREE_CAP")
        .env_remove("DBRANE_FORMAT")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    dbrane(&std::env::temp_dir(), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn jordan_image_ideal() {
    let o = run(&["image", &path("jordan.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("image ideal: ((y-3)^2)\n"));
}

#[test]
fn diagonal_decomposition() {
    let o = run(&["--json", "decompose", &path("diag.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["command"], "decompose");
    let text = stdout(&run(&["decompose", &path("diag.json")]));
    assert!(text.contains("image ideal: (y^2 - y)"));
    assert!(text.contains("total module length: 2"));
}

#[test]
fn noncommuting_input_is_a_validation_error() {
    let o = run(&["--json", "image", &path("noncommuting.json")]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "NotCommuting");
    assert_eq!(v["error"]["details"]["generators"], serde_json::json!([1, 2]));
    assert!(v["error"]["message"].as_str().unwrap().starts_with("NotCommuting(1, 2)"));
}

#[test]
fn relation_violation_is_a_validation_error() {
    assert_eq!(run(&["decompose", &path("nodal_violation.json")]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_with_three() {
    let o = run(&["decompose", &path("bad_polynomial.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("u^^2"));
    assert_eq!(run(&["image", "/nonexistent/input.json"]).status.code(), Some(3));
}

#[test]
fn nodal_brane_is_punctual() {
    let o = run(&["decompose", &path("nodal.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("module length 2"));
}

#[test]
fn higgsing_scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = dbrane(dir.path(), &["--json", "deform", &path("higgsing_path.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let events = v["outputs"]["events"].as_array().unwrap();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0]["kind"], "merge");
    assert!(events[0]["t"].as_f64().unwrap().abs() < 1e-6);
    let csv = std::fs::read_to_string(dir.path().join("higgsing_path.samples.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("t,"));
    let ts: std::collections::BTreeSet<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ts.len(), 65);
}

#[test]
fn no_csv_flag_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let o = dbrane(dir.path(), &["deform", "--no-csv", &path("recombination_path.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn airy_quantum_curve() {
    let o = run(&["quantum", &path("airy.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("quantum operator: D^2 - x"));
    assert!(text.contains("comparison: equal"));
}

#[test]
fn explicit_seed_vector() {
    let o = run(&["--json", "quantum", "--vector", "1,0", &path("airy.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.windows(7).any(|w| w == b"D^2 - x"));
}

#[test]
fn spectral_curve_has_zero_residual() {
    let o = run(&["spectral", &path("cubic_higgs.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Cayley-Hamilton residual: zero"));
}

#[test]
fn map_checks() {
    assert_eq!(run(&["check", &path("pi_xi_free.json")]).status.code(), Some(0));
    assert_eq!(run(&["check", &path("nodal_parametrization.json")]).status.code(), Some(0));
    let o = run(&["check", &path("pi_xi_conifold.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("well defined: fails"));
}

#[test]
fn conifold_demo_is_seeded() {
    let a = run(&["--json", "conifold-demo", "--max-rank", "3", "--trials", "50"]);
    let b = run(&["--json", "conifold-demo", "--max-rank", "3", "--trials", "50"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--json", "--seed", "1", "conifold-demo", "--max-rank", "3", "--trials", "50"]);
    assert_ne!(json(&a)["inputs_digest"], json(&c)["inputs_digest"]);
}

#[test]
fn environment_selects_the_format() {
    let o = Command::new(env!("CARGO_BIN_EXE_dbrane"))
        .args(["image", &path("jordan.json")])
        .env("DBRANE_FORMAT", "json")
        .output()
        .unwrap();
    assert_eq!(json(&o)["command"], "image");
}

#[test]
fn digest_depends_on_options() {
    let a = json(&run(&["--json", "image", &path("jordan.json")]));
    let b = json(&run(&["--json", "--tolerance", "1e-6", "image", &path("jordan.json")]));
    assert_ne!(a["inputs_digest"], b["inputs_digest"]);
    assert_eq!(b["options"]["tolerance"], 1e-6);
}

#[test]
fn batch_reports_the_worst_exit_code() {
    let o = run(&["--json", "batch", "image", &path("jordan.json"), &path("noncommuting.json"), &path("diag.json")]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    let statuses: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["ok", "error", "ok"]);
}
