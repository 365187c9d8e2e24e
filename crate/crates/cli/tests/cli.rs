use std::process::{Command, Output};

use serde_json::Value;

fn hvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hvlab")).args(args).env_remove("HVLAB_THREADS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn construct_then_count_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quadric.json");
    let out = hvlab(&["construct", "edoukou", "--q", "2", "--d", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["certificate"]["claimed_count"], 81);

    let out = hvlab(&["count", "--q", "2", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["intersection_count"], 81);

    let out = hvlab(&["audit", "--q", "2", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["violations"], Value::Array(vec![]));
    assert_eq!(r["result"]["double_count"][0], r["result"]["double_count"][1]);
}

#[test]
fn report_shape() {
    let out = hvlab(&["sample", "--q", "2", "--d", "2", "--samples", "20", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for key in ["config", "q", "d", "mode", "identities", "bounds", "violations", "seed", "result", "elapsed_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["mode"], "exhaustive");
    assert_eq!(r["config"]["seed"], 3);
    assert!(r["config"].get("threads").is_none());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(hvlab(&["count", "--q", "6"]).status.code(), Some(2));
    assert_eq!(hvlab(&["count", "--q", "2"]).status.code(), Some(2));
    assert_eq!(hvlab(&["construct", "edoukou", "--q", "2", "--d", "5"]).status.code(), Some(2));
    assert_eq!(hvlab(&["--threads", "0", "verify", "identities", "--q", "2"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(hvlab(&["count", "--q", "2", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
    // a polynomial over F_9 fed to a q = 2 run
    let other = dir.path().join("other.json");
    let out = hvlab(&["construct", "edoukou", "--q", "3", "--d", "2", "--out", other.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(hvlab(&["count", "--q", "2", "--in", other.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_flats_and_table_output() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("line.json");
    // the line x2 = x3 = x4 = 0 meets V3 where t^3 = 1: a secant
    std::fs::write(&line, r#"{"dim": 1, "basis": [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]}"#).unwrap();
    let out = hvlab(&["classify", "line", "--q", "2", "--in", line.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["class"]["meeting_count"], 3);

    let out = hvlab(&["--format", "table", "verify", "identities", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("mode")));
}
