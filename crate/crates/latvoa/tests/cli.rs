//! End-to-end runs of the `latvoa` binary: exit codes, error JSON and outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lattice(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../lattices")
        .join(name)
}

fn latvoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latvoa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn error_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

#[test]
fn passing_run_exits_zero_with_json_report() {
    let a1 = lattice("a1.json");
    let out = latvoa(&[
        "characters",
        "--lattice",
        a1.to_str().unwrap(),
        "--max-weight",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["command"], "characters");
    assert_eq!(report["passed"], true);
    assert_eq!(report["lattices"][0]["name"], "A1");
}

#[test]
fn failing_check_exits_one() {
    let l4 = lattice("rank1_norm4.json");
    let out = latvoa(&[
        "decompose",
        "--lattice",
        l4.to_str().unwrap(),
        "--max-weight",
        "1",
        "--sectors",
        "radius:0",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("decompose FAIL"), "{text}");
    assert!(text.contains("summand-count"));
}

#[test]
fn bad_inputs_exit_two_with_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let odd = dir.path().join("odd.json");
    std::fs::write(&odd, "{\n  \"gram\": [\n    [2, 0],\n    [0, 3]\n  ]\n}\n").unwrap();
    let out = latvoa(&["check-axioms", "--lattice", odd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = error_json(&out);
    assert_eq!(err["error"], "invalid-lattice");
    assert!(err["message"].as_str().unwrap().contains(":4:"));
    assert!(out.stdout.is_empty());

    let missing = dir.path().join("missing.json");
    let out = latvoa(&["characters", "--lattice", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"], "io");

    let a1 = lattice("a1.json");
    let out = latvoa(&[
        "characters",
        "--lattice",
        a1.to_str().unwrap(),
        "--sectors",
        "radius:x",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"], "invalid-argument");

    let out = latvoa(&["classify", "--lattice", a1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_json(&out)["message"].is_string());

    let out = latvoa(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_json(&out)["message"].is_string());
}

#[test]
fn help_goes_to_stdout() {
    let out = latvoa(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in [
        "check-axioms",
        "characters",
        "classify",
        "decompose",
        "tensor-check",
    ] {
        assert!(text.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn out_file_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = lattice("a1.json");
    for (format, check) in [
        ("csv", "command,seed,max_weight"),
        ("text", "characters PASS"),
        ("json", "\"command\": \"characters\""),
    ] {
        let path = dir.path().join(format!("report.{format}"));
        let out = latvoa(&[
            "characters",
            "--lattice",
            a1.to_str().unwrap(),
            "--max-weight",
            "2",
            "--format",
            format,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        let body = std::fs::read_to_string(&path).unwrap();
        assert!(body.contains(check), "{format}: {body}");
    }
}
