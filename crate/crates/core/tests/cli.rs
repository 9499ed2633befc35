use std::path::Path;
use std::process::Command;

use horostretch::cli_io::run_cli;

const TORUS: &str = "experiment v1
surface: once_punctured_torus
shears: e0=0.5 e1=0.3 e2=-0.8
curves:
  A = 0.0>1 1.1>0
  B = 0.0>2 1.2>0
grid: 0 12 0.5
";

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["horostretch"];
    argv.extend_from_slice(args);
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn stretch_run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "torus.exp", TORUS);
    let out = dir.path().join("torus.csv");
    let (code, _, err) = run(&["stretch", "run", "--input", &input, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("curve_id,t,length,I,L,class"));
    assert_eq!(lines.count(), 2 * 25);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",diverges")));
    let summary = std::fs::read_to_string(dir.path().join("torus.csv.summary.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert!(v.to_string().contains("diverges"));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "torus.exp", TORUS);
    let first = run(&["stretch", "run", "--input", &input, "--format", "json"]);
    let second = run(&["stretch", "run", "--input", &input, "--format", "json"]);
    assert_eq!(first.0, 0);
    assert_eq!(first.1, second.1);
}

#[test]
fn grid_and_time_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "torus.exp", TORUS);
    let (code, out, _) = run(&["stretch", "run", "--input", &input, "--grid", "0:12:4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 2 * 4);
    let (code, out, _) = run(&["curve", "length", "--input", &input, "--t", "-1.5"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("A,-1.5,"));
    let (code, out, _) = run(&["sandwich", "check", "--input", &input, "--t", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn singular_graph_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "torus.exp", TORUS);
    let (code, out, _) = run(&["singular-graph", "--input", &input, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["crossing_cap"], 30);
    assert!(!v["essential_cycles"].as_array().unwrap().is_empty());
}

#[test]
fn surface_validate_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "s.tri",
        "ideal-triangulation v1\ntri 0: 1.0 1.1 1.2\ntri 1: 0.0 0.1 0.2\n",
    );
    let (code, out, _) = run(&["surface", "validate", "--input", &input]);
    assert_eq!(code, 0);
    assert_eq!(out, "triangles,edges,euler_characteristic,cusps\n2,3,-1,6\n");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.exp");
    assert_eq!(run(&["stretch", "run", "--input", missing.to_str().unwrap()]).0, 1);
    assert_eq!(run(&["stretch", "run"]).0, 1);
    assert_eq!(run(&["stretch", "run", "--input", "x", "--format", "xml"]).0, 1);

    let incomplete = write(dir.path(), "bad.exp", &TORUS.replace("e2=-0.8", "e2=-0.9"));
    let (code, _, err) = run(&["stretch", "run", "--input", &incomplete]);
    assert_eq!(code, 2);
    assert!(err.contains("incomplete"), "{err}");

    let bad_tri = write(
        dir.path(),
        "bad.tri",
        "ideal-triangulation v1\ntri 0: 0.0 1.1 1.2\ntri 1: 1.0 0.1 0.2\n",
    );
    assert_eq!(run(&["surface", "validate", "--input", &bad_tri]).0, 2);

    let peripheral = write(
        dir.path(),
        "p.exp",
        &TORUS.replace("  B = 0.0>2 1.2>0\n", "  P = 0.0>1 1.1>2 0.2>0 1.0>1 0.1>2 1.2>0\n"),
    );
    let (code, out, _) = run(&["stretch", "run", "--input", &peripheral, "--format", "json"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"peripheral\""));

    let tight = write(dir.path(), "tight.exp", &format!("{TORUS}tolerances: slope_min=1.05\n"));
    let (code, _, err) = run(&["stretch", "run", "--input", &tight]);
    assert_eq!(code, 3);
    assert!(err.contains("slope"), "{err}");
}

#[test]
fn binary_entry_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "torus.exp", TORUS);
    let ok = Command::new(env!("CARGO_BIN_EXE_horostretch"))
        .args(["curve", "length", "--input", &input, "--format", "json"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    let bad = Command::new(env!("CARGO_BIN_EXE_horostretch"))
        .args(["curve", "length", "--input", "/nonexistent/x.exp"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
