use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_dipole-lab");

fn run_with(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("config.json");
    fs::write(&path, config).unwrap();
    Command::new(BIN).arg("--config").arg(&path).args(args).current_dir(dir).output().unwrap()
}

const PHASE: &str = r#"{
  "experiment": "phase",
  "fields": {"variant": "wei", "lambda": 1.0, "b0": 2.0},
  "params": {"alpha_pol": 0.5, "mu": 0.3},
  "loop": {"radius": 1.0, "segments": 500},
  "time_leg": {"tau": 0.25}
}"#;

#[test]
fn phase_run_writes_result_files() {
    let tmp = TempDir::new().unwrap();
    let out = run_with(tmp.path(), PHASE, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let result: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("out/result.json")).unwrap()).unwrap();
    assert_eq!(result["passed"], true);
    assert_eq!(result["config"]["loop"]["segments"], 500);
    assert!(result["notes"].as_array().is_some_and(|n| !n.is_empty()));
    assert!(result.get("elapsed_s").is_none());
    assert!(tmp.path().join("out/metadata.json").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let verify = r#"{"experiment": "verify", "seed": 11, "draws": 25}"#;
    for dir in ["a", "b"] {
        let out = run_with(tmp.path(), verify, &["--out", dir]);
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["result.json", "table.csv"] {
        let a = fs::read(tmp.path().join("a").join(file)).unwrap();
        let b = fs::read(tmp.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}

#[test]
fn tight_tolerance_exits_with_two() {
    let tmp = TempDir::new().unwrap();
    let out = run_with(tmp.path(), PHASE, &["--tolerance", "1e-300"]);
    assert_eq!(out.status.code(), Some(2));
    let result = fs::read_to_string(tmp.path().join("out/result.json")).unwrap();
    assert!(result.contains("\"passed\": false"));
}

#[test]
fn config_errors_exit_with_one_and_name_the_key() {
    let tmp = TempDir::new().unwrap();
    let out = run_with(tmp.path(), r#"{"experiment": "phase", "loop": {"radius": -1.0}}"#, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("loop.radius"));

    let out = run_with(tmp.path(), r#"{"experiment": "verify"}"#, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn positional_experiment_and_seed_override_the_file() {
    let tmp = TempDir::new().unwrap();
    let out = run_with(tmp.path(), PHASE, &["verify", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let result: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("out/result.json")).unwrap()).unwrap();
    assert_eq!(result["config"]["experiment"], "verify");
    assert_eq!(result["outputs"]["verify"]["seed"], 5);
}

#[test]
fn potential_table_has_expected_columns() {
    let tmp = TempDir::new().unwrap();
    let config = r#"{
      "experiment": "potential",
      "fields": {"variant": "wei", "lambda": 2.0, "b0": 1.0},
      "params": {"alpha_pol": 1.0, "chi": 0.5},
      "grid": {"r_min": 1.0, "r_max": 2.0, "nr": 5}
    }"#;
    let out = run_with(tmp.path(), config, &[]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("out/table.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r,v_inverse_square,v_magnetic_local");
    assert_eq!(lines[1], "1,-2,-0.25");
    assert_eq!(lines[5], "2,-0.5,-0.25");
}

#[test]
fn grid_sweep_reports_fourth_order() {
    let tmp = TempDir::new().unwrap();
    let config = r#"{
      "experiment": "sweep",
      "fields": {"variant": "wei", "lambda": 1.0, "b0": 1.0},
      "params": {"m": 1.0, "alpha_pol": 1.0},
      "grid": {"r_min": 1.0, "r_max": 2.0, "nr": 11, "nphi": 16},
      "sweep": {"axis": "grid", "values": [1, 2, 4, 8]}
    }"#;
    let out = run_with(tmp.path(), config, &[]);
    assert_eq!(out.status.code(), Some(0));
    let result: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("out/result.json")).unwrap()).unwrap();
    let order = result["outputs"]["sweep"]["observed_order"].as_f64().unwrap();
    assert!((order - 4.0).abs() < 0.2, "{order}");
    let csv = fs::read_to_string(tmp.path().join("out/table.csv")).unwrap();
    assert!(csv.starts_with("value,deviation,runtime_s\n"));
}
