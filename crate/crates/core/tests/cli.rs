//! End-to-end tests of the command-line interface: exit codes, output
//! schemas, the golden matrix fixture, and byte-level determinism across
//! repeated runs and thread counts.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmhd"))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary should spawn");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const GOOD_STATE: &str =
    r#"{"p": 1.0, "u": [0.3, 0.0, 0.0], "H": [0.0, 1.0, 0.0], "S": 0.0, "eos": {"gamma": 2.0}}"#;

const PAIR: &str = r#"{
  "plus":  {"p": 1.0, "u": [0.0, 0.05, 0.0], "H": [0.0, 1.0, 0.1], "S": 0.0, "eos": {"gamma": 2.0}},
  "minus": {"p": 1.0, "u": [0.0, 0.0, 0.05], "H": [0.0, 0.1, 1.0], "S": 0.0, "eos": {"gamma": 2.0}}
}"#;

const DEGENERATE_PAIR: &str = r#"{
  "plus":  {"p": 1.0, "u": [0.0, 0.05, 0.0], "H": [0.0, 1.0, 0.0], "S": 0.0, "eos": {"gamma": 2.0}},
  "minus": {"p": 1.0, "u": [0.0, 0.0, 0.05], "H": [0.0, 2.0, 0.0], "S": 0.0, "eos": {"gamma": 2.0}}
}"#;

#[test]
fn check_state_verdicts_and_exit_codes() {
    let out = run_with_stdin(&["check-state"], GOOD_STATE);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["admissible"], serde_json::Value::Bool(true));

    let bad = r#"{"p": -1.0, "u": [0.0,0.0,0.0], "H": [0.0,0.0,0.0], "S": 0.0, "eos": {"gamma": 2.0}}"#;
    let out = run_with_stdin(&["check-state"], bad);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["admissible"], serde_json::Value::Bool(false));

    let out = run_with_stdin(&["check-state"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let lines: Vec<&str> = stderr.trim_end().lines().collect();
    assert_eq!(lines.len(), 1, "error must be a single line: {stderr}");
    let err: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(err["code"], serde_json::Value::from(2));
    assert!(err["error"].as_str().unwrap().contains("schema"));
}

#[test]
fn matrices_matches_golden_fixture_bytes() {
    let out = bin()
        .args(["matrices", "--input", &fixture("golden_rest_state.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read(fixture("golden_rest_matrices.json")).unwrap();
    assert_eq!(out.stdout, golden, "matrix dump drifted from the golden fixture");
}

#[test]
fn matrices_csv_has_header_and_parses() {
    let out = run_with_stdin(&["matrices", "--format", "csv", "--lambda", "0.25"], GOOD_STATE);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("matrix,row,col,value"));
    assert!(lines.next().unwrap().starts_with("lambda,,,"));
    assert_eq!(text.lines().count(), 2 + 4 * 64);
}

#[test]
fn window_reports_bound_and_judges_lambda() {
    let out = run_with_stdin(&["window"], GOOD_STATE);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let bound = v["window_bound"].as_f64().unwrap();
    assert!(bound > 0.0 && bound < 1.0);
    assert!(v.get("lambda").is_none());

    let inside = run_with_stdin(&["window", "--lambda", "0.01"], GOOD_STATE);
    assert_eq!(inside.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&inside)).unwrap();
    assert_eq!(v["inside"], serde_json::Value::Bool(true));

    let outside = run_with_stdin(&["window", "--lambda", "0.99"], GOOD_STATE);
    assert_eq!(outside.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&outside)).unwrap();
    assert_eq!(v["inside"], serde_json::Value::Bool(false));
}

#[test]
fn cvs_exit_codes_stable_unstable_degenerate() {
    let out = run_with_stdin(&["cvs"], PAIR);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(report["g"].as_f64().unwrap() > 0.0);
    assert_eq!(report["stable"], serde_json::Value::Bool(true));
    assert_eq!(report["windows_ok"], serde_json::Value::Bool(true));

    let unstable_pair = r#"{
      "plus":  {"p": 1.0, "u": [0.0, 1.5, 0.0], "H": [0.0, 1.0, 0.1], "S": 0.0, "eos": {"gamma": 2.0}},
      "minus": {"p": 1.0, "u": [0.0, -1.5, 0.05], "H": [0.0, 0.1, 1.0], "S": 0.0, "eos": {"gamma": 2.0}}
    }"#;
    let out = run_with_stdin(&["cvs"], unstable_pair);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(report["g"].as_f64().unwrap() < 0.0);

    let out = run_with_stdin(&["cvs"], DEGENERATE_PAIR);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let err: serde_json::Value = serde_json::from_str(stderr.trim_end()).unwrap();
    assert!(err["error"].as_str().unwrap().contains("degenerate"));

    let out = run_with_stdin(&["cvs"], r#"{"plus": {}, "minus": {}}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cvs_rejects_normal_components() {
    let tilted = r#"{
      "plus":  {"p": 1.0, "u": [0.2, 0.05, 0.0], "H": [0.0, 1.0, 0.1], "S": 0.0, "eos": {"gamma": 2.0}},
      "minus": {"p": 1.0, "u": [0.0, 0.0, 0.05], "H": [0.0, 0.1, 1.0], "S": 0.0, "eos": {"gamma": 2.0}}
    }"#;
    let out = run_with_stdin(&["cvs"], tilted);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_grid_shape_order_and_degenerate_rows() {
    let out = run_with_stdin(&["sweep", "--grid", "0.0:0.4:3,0.0:1.0:3"], PAIR);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dv,dphi,G,stable");
    assert_eq!(lines.len(), 1 + 9);

    let mut expected = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            expected.push((0.2 * i as f64, 0.5 * j as f64));
        }
    }
    for (line, (dv, dphi)) in lines[1..].iter().zip(&expected) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4);
        assert!((cols[0].parse::<f64>().unwrap() - dv).abs() < 1e-15);
        assert!((cols[1].parse::<f64>().unwrap() - dphi).abs() < 1e-15);
        let g: f64 = cols[2].parse().unwrap();
        let stable: bool = cols[3].parse().unwrap();
        if *dphi == 0.0 {
            assert!(g.is_nan(), "twist-free rows are degenerate for this pair");
            assert!(!stable);
        } else {
            assert!(g.is_finite());
            assert_eq!(stable, g > 0.0);
        }
    }
}

#[test]
fn sweep_rejects_superluminal_midpoint_and_bad_grid() {
    let out = run_with_stdin(&["sweep", "--grid", "1.99:2.2:2,0.5:0.5:1"], PAIR);
    assert_eq!(out.status.code(), Some(2));

    let out = run_with_stdin(&["sweep", "--grid", "nonsense"], PAIR);
    assert_eq!(out.status.code(), Some(2));

    let out = run_with_stdin(&["sweep", "--grid", "0:1:3,0:1:0"], PAIR);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_small_residuals() {
    let out = bin()
        .args(["verify", "--trials", "300", "--seed", "47"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["trials"], serde_json::Value::from(300));
    assert_eq!(report["failures"], serde_json::Value::from(0));
    assert!(report["max_residual"].as_f64().unwrap() <= 1e-5);

    let out = bin()
        .args(["verify", "--trials", "100", "--seed", "5", "--lambda", "0.7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = bin()
        .args(["verify", "--trials", "10", "--lambda", "1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let sweep_args = ["sweep", "--grid", "0.0:0.7:5,0.2:1.3:4"];
    let a = run_with_stdin(&sweep_args, PAIR);
    let b = run_with_stdin(&sweep_args, PAIR);
    assert_eq!(a.stdout, b.stdout);

    let mut single = bin();
    single
        .args(sweep_args)
        .env("RAYON_NUM_THREADS", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = single.spawn().unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(PAIR.as_bytes())
        .unwrap();
    let c = child.wait_with_output().unwrap();
    assert_eq!(a.stdout, c.stdout);

    let v1 = bin()
        .args(["verify", "--trials", "200", "--seed", "11"])
        .output()
        .unwrap();
    let v2 = bin()
        .args(["verify", "--trials", "200", "--seed", "11"])
        .env("RAYON_NUM_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn output_flag_writes_file_with_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("matrices.json");
    let to_file = bin()
        .args([
            "matrices",
            "--input",
            &fixture("golden_rest_state.json"),
            "--output",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    let golden = std::fs::read(fixture("golden_rest_matrices.json")).unwrap();
    assert_eq!(written, golden);
}

#[test]
fn logging_stays_on_stderr() {
    let out = bin()
        .args(["verify", "--trials", "20", "--seed", "1"])
        .env("RMHD_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let quiet = bin()
        .args(["verify", "--trials", "20", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.stdout, quiet.stdout, "logging must not touch payload bytes");
    assert!(String::from_utf8(out.stderr).unwrap().contains("max residual"));
}
