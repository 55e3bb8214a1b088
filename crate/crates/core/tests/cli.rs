use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use monores::kernel::{ExponentMatrix, Rat};
use monores::gps::SupportSet;
use monores::manifold::MonomialManifold;
use monores::mideal::PrincipalizeOptions;
use monores::pipeline::{reduce, ReductionProblem};

fn monores(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monores")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const WORKED: &str = r#"{"support": {"variables": ["z1", "z2"], "points": [["2", "1"], ["0", "2"]]}, "stratum_dim": 0}"#;

#[test]
fn reduce_then_replay_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let (input, trace, dot) = (dir.path().join("p.json"), dir.path().join("t.json"), dir.path().join("s.dot"));
    fs::write(&input, WORKED).unwrap();
    let out = monores(&["reduce", "--input", p(&input), "--trace", p(&trace), "--dot", p(&dot), "--check-numeric"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(&dot).unwrap().contains("cluster_1"));
    let text = fs::read_to_string(&trace).unwrap();
    assert!(text.contains("\"numeric_check\""));
    assert_eq!(code(&monores(&["replay", "--trace", p(&trace)])), 0);
}

#[test]
fn bare_support_and_stratum_override() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    fs::write(&input, r#"{"variables": ["z1", "z2"], "points": [["2", "1"], ["0", "2"]]}"#).unwrap();
    let out = monores(&["reduce", "--input", p(&input), "--stratum-dim", "3"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("ℝ³ × Z̄"));
}

#[test]
fn principalize_reads_an_ideal_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("i.json");
    fs::write(
        &input,
        r#"{"dimension": 2, "labels": ["E1", "E2"], "generators": [["2", "1"], ["0", "2"]]}"#,
    )
    .unwrap();
    let out = monores(&["principalize", "--input", p(&input)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"age\": 1"));
}

#[test]
fn budget_exceeded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    fs::write(&input, WORKED).unwrap();
    assert_eq!(code(&monores(&["reduce", "--input", p(&input), "--max-steps", "0"])), 3);
}

#[test]
fn validate_reports_violations_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let report = reduce(
        &ReductionProblem::new(SupportSet::parse(&["z1", "z2"], &[&["2", "1"], &["0", "2"]]).unwrap(), 0).unwrap(),
        &PrincipalizeOptions::default(),
    )
    .unwrap();
    let end: &MonomialManifold = report.star().end();
    let good = dir.path().join("good.json");
    fs::write(&good, serde_json::to_string(&end.to_json()).unwrap()).unwrap();
    assert_eq!(code(&monores(&["validate", "--input", p(&good)])), 0);

    let e = end.edges().next().unwrap();
    let new_row = e.forward.row_labels().iter().find(|l| !e.shared.contains(*l)).unwrap();
    let shared_col = e.shared.iter().next().unwrap();
    let bad_matrix: ExponentMatrix = e.forward.with_entry(new_row, shared_col, Rat::from_integer(7)).unwrap();
    let corrupt = end.replace_edge_matrix(&e.from, &e.to, bad_matrix).unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&corrupt.to_json()).unwrap()).unwrap();
    let out = monores(&["validate", "--input", p(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(!out.stdout.is_empty());
}

#[test]
fn tampered_trace_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (input, trace) = (dir.path().join("p.json"), dir.path().join("t.json"));
    fs::write(&input, WORKED).unwrap();
    assert_eq!(code(&monores(&["reduce", "--input", p(&input), "--trace", p(&trace)])), 0);
    let text = fs::read_to_string(&trace).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["steps"][0]["new_label"] = serde_json::Value::String("E∞7".into());
    fs::write(&trace, serde_json::to_string_pretty(&json).unwrap()).unwrap();
    assert_eq!(code(&monores(&["replay", "--trace", p(&trace)])), 2);
}

#[test]
fn malformed_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.json");
    fs::write(&input, "{not json").unwrap();
    assert_eq!(code(&monores(&["reduce", "--input", p(&input)])), 1);
    assert_eq!(code(&monores(&["replay", "--trace", p(&dir.path().join("missing.json"))])), 1);
}
