use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn mmdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmdist")).args(args).output().unwrap()
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn box_x2_p1() {
    let out = mmdist(&["dist", "box", &corpus("x2.json"), &corpus("p1.json"), "--exact", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 0.5);
    assert_eq!(v["reevaluated"], 0.5);
    assert!(v["pairset"].is_array());
    assert_eq!(v["coupling"], serde_json::json!([[0.5], [0.5]]));
}

#[test]
fn box_self_is_zero() {
    let out = mmdist(&["dist", "box", &corpus("cycle4.json"), &corpus("cycle4.json"), "--exact", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 0.0);
}

#[test]
fn dconc_x2_p1() {
    let out = mmdist(&["dist", "dconc", &corpus("x2.json"), &corpus("p1.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["lower"].as_f64(), v["upper"].as_f64()), (Some(0.5), Some(0.5)));
    assert_eq!(v["flags"][0], "exact (unique coupling)");
}

#[test]
fn eurandom_and_prohorov() {
    let out = mmdist(&["dist", "eurandom", &corpus("x2_skewed.json"), &corpus("p1.json"), "--format", "json"]);
    assert_eq!(json(&out)["value"], 0.375);
    let out = mmdist(&["dist", "prohorov", &corpus("x2.json"), &corpus("x2_skewed.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 0.25);
    let out = mmdist(&["dist", "prohorov", &corpus("x2.json"), &corpus("p1.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_output() {
    let out = mmdist(&["dist", "box", &corpus("x2_skewed.json"), &corpus("p1.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("value") && l.ends_with("0.25")), "{text}");
}

#[test]
fn budget_exit_codes() {
    let out = mmdist(&["dist", "eurandom", &corpus("cycle4.json"), &corpus("cycle4.json"), "--exact"]);
    assert_eq!(out.status.code(), Some(3));
    let out = mmdist(&["dist", "box", &corpus("cycle4.json"), &corpus("line3.json"), "--exact", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = mmdist(&["dist", "box", &corpus("cycle4.json"), &corpus("line3.json"), "--budget", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["flags"].as_array().unwrap().iter().any(|f| f.as_str().unwrap().starts_with("downgraded")));
}

#[test]
fn gen_line() {
    let out = mmdist(&["gen", "line", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dist"], serde_json::json!([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]));
    assert_eq!(v["mass"][0].as_f64(), Some(1.0 / 3.0));
}

#[test]
fn gen_random_is_deterministic_and_valid() {
    let a = mmdist(&["gen", "random", "4", "--seed", "7"]);
    let b = mmdist(&["gen", "random", "4", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "r.json", std::str::from_utf8(&a.stdout).unwrap());
    let out = mmdist(&["dist", "box", p.to_str().unwrap(), p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 0.0);
    let c = mmdist(&["gen", "random", "4", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_rejects_bad_n() {
    assert_eq!(mmdist(&["gen", "line", "0"]).status.code(), Some(2));
    assert_eq!(mmdist(&["gen", "cube", "9"]).status.code(), Some(2));
}

#[test]
fn gen_cube_and_cycle() {
    let v = json(&mmdist(&["gen", "cube", "2"]));
    assert_eq!(v["labels"], serde_json::json!(["00", "01", "10", "11"]));
    assert_eq!(v["dist"][0][3], 2.0);
    let v = json(&mmdist(&["gen", "cycle", "5"]));
    assert_eq!(v["dist"][0][3], 2.0);
}

#[test]
fn corrupt_document() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"name": "bad", "dist": [[0, 1], [2, 0]], "mass": [0.5, 0.5]}"#);
    let out = mmdist(&["dist", "box", bad.to_str().unwrap(), &corpus("p1.json")]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("d[0][1]") && msg.contains("d[1][0]"), "{msg}");
    let out = mmdist(&["check", "axioms", dir.path().to_str().unwrap(), "--count", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let junk = write(dir.path(), "junk.json", "{not json");
    let out = mmdist(&["dist", "box", junk.to_str().unwrap(), &corpus("p1.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_on_small_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["x2.json", "p1.json", "x2_skewed.json"] {
        std::fs::copy(corpus(name), dir.path().join(name)).unwrap();
    }
    let out = mmdist(&["check", "all", dir.path().to_str().unwrap(), "--count", "5", "--seed", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let lines: Vec<Value> =
        out.stdout.split(|&b| b == b'\n').filter(|l| !l.is_empty()).map(|l| serde_json::from_slice(l).unwrap()).collect();
    assert!(lines.iter().all(|l| l["passed"] == true));
    assert!(lines.iter().any(|l| l["check"].as_str().unwrap().starts_with("corpus:")));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["dist", "dconc", &corpus("line3.json"), &corpus("x2_skewed.json"), "--format", "json"];
    let strip = |o: Output| {
        let mut v = json(&o);
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    assert_eq!(strip(mmdist(&args)), strip(mmdist(&args)));
}
