//! End-to-end runs of the `refinv` binary.

use std::path::Path;
use std::process::{Command, Output};

const SYSTEM: &str = r#"{
  "F": {"rows": 2, "cols": 2, "data": [[1, 0], [0, 1]]},
  "G": {"rows": 2, "cols": 2, "data": [[0, 0], [0, 0]]},
  "A": {"rows": 2, "cols": 2, "data": [[1, 0.2], [0, 1]]},
  "B": {"rows": 2, "cols": 2, "data": [[0.1, 0], [0, 0.3]]}
}"#;

const COMPLEX_SYSTEM: &str = r#"{
  "A": {"rows": 1, "cols": 1, "data": [[[0.5, 0.1]]]},
  "B": {"rows": 1, "cols": 1, "data": [[[0.2, -0.3]]]}
}"#;

fn refinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refinv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write input");
    path.to_str().expect("utf-8 path").to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn fundamental_writes_csv_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", SYSTEM);
    let out = refinv(&["fundamental", "--system", &sys, "--t-grid", "-0.5:0.5:0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,X[0][0],X[0][1],X[1][0],X[1][1],dX[0][0],dX[0][1],dX[1][0],dX[1][1],residual"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    // X(0) = I
    assert_eq!(&rows[2][..5], &[0.0, 1.0, 0.0, 0.0, 1.0]);
    assert!(rows.iter().all(|r| r[9] < 1e-12));
}

#[test]
fn invariant_reports_value_and_route_check() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        r#"{"matrices": [{"rows": 2, "cols": 2, "data": [[1, 2], [3, 4]]},
                          {"rows": 2, "cols": 2, "data": [[0, 1], [1, 0]]}]}"#,
    );
    let out = refinv(&["invariant", "--matrices", &m, "--index", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // Tr X Tr Y - Tr XY = 5 * 0 - 5
    assert!((v["value"].as_f64().unwrap() + 5.0).abs() < 1e-12);
    assert_eq!(v["checks"][0]["pass"], true);
    for key in ["name", "paper_ref", "residual", "tolerance", "pass"] {
        assert!(v["checks"][0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn invariant_with_negative_index_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        r#"[{"rows": 1, "cols": 1, "data": [[2]]}]"#,
    );
    let out = refinv(&["invariant", "--matrices", &m, "--index", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"].as_f64(), Some(0.0));
}

#[test]
fn closure_report_and_numeric_check() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", SYSTEM);
    let out = refinv(&["closure", "--n", "2", "--system", &sys]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["closed"], true);
    assert_eq!(v["states"].as_array().unwrap().len(), 2);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));

    let open = refinv(&["closure", "--n", "3", "--max-depth", "4"]);
    assert_eq!(open.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&open)).unwrap();
    assert_eq!(v["closed"], false);
}

#[test]
fn closure_dimension_mismatch_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "sys.json", SYSTEM);
    let out = refinv(&["closure", "--n", "3", "--system", &sys]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn complex_solve_writes_pair_table() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "c.json", COMPLEX_SYSTEM);
    let out = refinv(&["complex-solve", "--system", &sys, "--t-grid", "0:0.5:0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "t,X0[0][0].re,X0[0][0].im,X1[0][0].re,X1[0][0].im"
    );
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "0,1,0,0,0");
}

#[test]
fn verify_writes_to_out_file_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for path in [&first, &second] {
        let out = refinv(&[
            "verify",
            "--suite",
            "graded",
            "--seed",
            "3",
            "--trials",
            "5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["passed"], true);
}

#[test]
fn failing_tolerance_exits_one() {
    let out = refinv(&["verify", "--suite", "graded", "--trials", "2", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn opposite_sign_mode_fails_the_determinant_suite() {
    let out = refinv(&[
        "verify",
        "--suite",
        "ajl",
        "--mode",
        "paper-theorem2",
        "--trials",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_inputs_exit_two_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"matrices": [{"rows": 2, "cols": 2, "data": [[1, 2], [3, "x"]]}]}"#,
    );
    let out = refinv(&["invariant", "--matrices", &bad, "--index", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("matrices[0].data[1][1]"), "{err}");

    let out = refinv(&[
        "invariant",
        "--matrices",
        "/nonexistent/m.json",
        "--index",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = refinv(&["fundamental", "--system", &bad, "--t-grid", "0:1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = refinv(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}
