use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn stabext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabext"))
        .args(args)
        .env("STABEXT_CORPUS", corpus())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn extdeg_of_a_periodic_module() {
    let out = stabext(&["extdeg", "--entry", "f3_x3", "M1", "--window", "20", "--guard", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["verdict"], "Infinite");
    assert_eq!(v["period"], 2);
}

#[test]
fn extdeg_of_a_projective() {
    let out = stabext(&["extdeg", "--entry", "f3_x3", "P"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "MinusInfinity");
}

#[test]
fn extdeg_of_the_liu_schulz_module() {
    let out = stabext(&["extdeg", "--entry", "liu_schulz_q2", "M", "--window", "20", "--guard", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["verdict"], "Finite");
    assert_eq!(v["m"], 1);
}

#[test]
fn ext_from_files_and_json_out() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ext.json");
    let entry = corpus().join("nakayama23");
    let (a, s1, u2) = (entry.join("algebra.json"), entry.join("modules/S1.json"), entry.join("modules/U2.json"));
    let out = stabext(&[
        "ext",
        "--algebra",
        a.to_str().unwrap(),
        s1.to_str().unwrap(),
        u2.to_str().unwrap(),
        "--from",
        "-2",
        "--to",
        "3",
        "--json-out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["dims"]["1"], 1);
    assert_eq!(v["dims"]["2"], 0);
    assert_eq!(v["dims"].as_object().unwrap().len(), 6);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn malformed_input_is_exit_2_with_a_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": ").unwrap();
    let out = stabext(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.json"), "{}", stderr(&out));

    // Valid JSON, wrong field type.
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(corpus().join("f2_x2/algebra.json")).unwrap()).unwrap();
    v["dim"] = Value::String("two".into());
    std::fs::write(&bad, v.to_string()).unwrap();
    let out = stabext(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dim"), "{}", stderr(&out));

    let out = stabext(&["extdeg", "--entry", "f3_x3", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope"));
}

#[test]
fn failed_axioms_are_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alg.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(corpus().join("f2_x2/algebra.json")).unwrap()).unwrap();
    // x * x = 1: the declared radical is no longer nilpotent.
    v["table"][1][1] = serde_json::json!([1, 0]);
    std::fs::write(&path, v.to_string()).unwrap();
    let out = stabext(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["ok"], false);
    assert!(doc["checks"].as_array().unwrap().iter().any(|c| c["passed"] == false));
}

#[test]
fn validate_the_corpus() {
    let out = stabext(&["validate", corpus().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
}

#[test]
fn ar_with_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let out = stabext(&["ar", "--entry", "liu_schulz_q2", "M", "--radius", "1", "--edge-list", edges.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["sequence"]["alpha"], 1);
    assert!(v["component"]["vertices"].as_array().unwrap().len() >= 2);
    let text = std::fs::read_to_string(&edges).unwrap();
    assert!(text.lines().all(|l| l.split(' ').count() == 2));
    assert!(text.contains("v0=M"));
}

#[test]
fn verify_suites() {
    let out = stabext(&["verify", "nope"]);
    assert_eq!(out.status.code(), Some(2));

    let out = stabext(&["verify", "claims", "tubes", "--radius", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["ok"], true);
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["claims", "tubes"]);
}
