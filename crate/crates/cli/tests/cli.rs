use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nilgrade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilgrade")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, extra: &[&str]) -> PathBuf {
    let out = path(dir, name);
    let mut args = vec!["gen"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["-o", s(&out)]);
    let o = nilgrade(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn bounds_table() {
    let o = nilgrade(&["bounds", "--n", "2", "--d", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["Q"], 4);
    assert_eq!(v["N"], 4);
    assert_eq!(v["h"], "13");
}

#[test]
fn strict_triangular_report() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "strict.json", &["triangular", "--k", "4", "--strict"]);
    let report = path(&dir, "report.json");
    let o = nilgrade(&["theorem2", s(&inst), "-o", s(&report)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["kind"], "nilgrade-report");
    assert_eq!(v["report"]["ideal_dim"], 6);

    let o = nilgrade(&["nilindex", s(&report), "--subspace", "result"]);
    assert_eq!(stdout(&o).trim(), "4");
    let o = nilgrade(&["validate", s(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn tower_oracle_matches() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "small.json", &["graded", "--seed", "5", "--max-dim", "12", "--max-vertices", "2", "--max-arrows", "3", "--truncation", "3", "--ideal-len", "2"]);
    let o = nilgrade(&["tower-oracle", s(&inst), "--max-w", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("MATCH") && !out.contains("MISMATCH"));
}

#[test]
fn tampered_table_is_a_check_failure() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "graded.json", &["graded", "--seed", "1", "--group", "c3"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    v["group"]["table"][1][1] = Value::from(0);
    std::fs::write(&inst, v.to_string()).unwrap();
    let o = nilgrade(&["validate", s(&inst)]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL group axioms"));
    let block: Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert_eq!(block["status"], "fail");
    assert!(block["failures"][0]["witness"].is_object());
}

#[test]
fn missing_grading_is_invalid_input() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "orbit.json", &["orbit", "--seed", "2", "--group", "s3"]);
    let o = nilgrade(&["theorem2", s(&inst)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = nilgrade(&["theorem1", s(&inst)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn unknown_fields_are_rejected() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "g.json", &["graded", "--seed", "3"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    v["algebra"]["extra"] = Value::from(1);
    std::fs::write(&inst, v.to_string()).unwrap();
    let o = nilgrade(&["validate", s(&inst)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("algebra"));
}

#[test]
fn edited_report_fails_reverification() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "upper.json", &["triangular", "--k", "3"]);
    let report = path(&dir, "r.json");
    assert_eq!(nilgrade(&["theorem2", s(&inst), "-o", s(&report)]).status.code(), Some(0));
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let dim = v["instance"]["algebra"]["dim"].as_u64().unwrap() as usize;
    let ideal = v["report"]["ideal"].as_array_mut().unwrap();
    let mut one = vec![0u64; dim];
    one[0] = 1;
    ideal.push(Value::from(one));
    std::fs::write(&report, v.to_string()).unwrap();
    let o = nilgrade(&["validate", s(&report)]);
    assert_ne!(o.status.code(), Some(0));
}
