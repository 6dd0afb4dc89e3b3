use std::path::Path;
use std::process::{Command, Output};

fn hadamard(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hadamard"))
        .current_dir(dir)
        .env_remove("HADAMARD_OUT_DIR")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn config_line(csv: &str) -> serde_json::Value {
    let line = csv.lines().find_map(|l| l.strip_prefix("# config=")).unwrap();
    serde_json::from_str(line).unwrap()
}

#[test]
fn passing_run_exits_zero_and_writes_default_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = hadamard(dir.path(), &["frac-op", "--input", "log_power:2", "--n", "128", "--tol", "1e-10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"));
    let csv = std::fs::read_to_string(dir.path().join("frac-op.csv")).unwrap();
    assert!(csv.starts_with("# command=frac-op\n"));
    assert!(csv.lines().any(|l| l == "t,numeric,oracle,error"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 129);
}

#[test]
fn violated_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = hadamard(dir.path(), &["frac-op", "--input", "log_trig:1,1,0", "--n", "256", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    // the table is still written so the failure can be inspected
    assert!(dir.path().join("frac-op.csv").exists());
}

#[test]
fn unknown_catalog_key_lists_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let o = hadamard(dir.path(), &["solve-diffusion", "--problem", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("nope") && err.contains("manufactured_ch"), "{err}");

    let o = hadamard(dir.path(), &["solve-elliptic", "--problem", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("manufactured"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"alpha": 0.3, "bogus": 1}"#).unwrap();
    let o = hadamard(dir.path(), &["frac-op", "--config", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));

    let o = hadamard(dir.path(), &["frac-op", "--config", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hadamard(dir.path(), &["frac-op", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hadamard(dir.path(), &["convergence", "--levels", "32,64"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hadamard(dir.path(), &["frac-op", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("frac-op.csv").exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"alpha": 0.3, "n": 64}"#).unwrap();
    let o = hadamard(dir.path(), &["frac-op", "--config", "c.json", "--alpha", "0.7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cfg = config_line(&std::fs::read_to_string(dir.path().join("frac-op.csv")).unwrap());
    assert_eq!(cfg["alpha"], 0.7);
    assert_eq!(cfg["n"], 64);
    assert_eq!(cfg["op"], "hadamard");
}

#[test]
fn out_dir_variable_applies_to_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hadamard"))
        .current_dir(dir.path())
        .env("HADAMARD_OUT_DIR", "results")
        .args(["frac-op", "--n", "32", "--out", "r.csv"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("results/r.csv").exists());

    let abs = dir.path().join("abs.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_hadamard"))
        .current_dir(dir.path())
        .env("HADAMARD_OUT_DIR", "results")
        .args(["frac-op", "--n", "32", "--out"])
        .arg(&abs)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(abs.exists());
}

#[test]
fn seed_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let o = hadamard(dir.path(), &["verify-extremum", "--count", "5", "--n", "64", "--seed", "17", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("verify-extremum.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "# seed=17"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("# timestamp=")).count(), 1);
}
