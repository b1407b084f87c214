use mvcl_core::algebra::make_lukasiewicz;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn mvcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvcl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn luk_file(dir: &Path, n: usize) -> PathBuf {
    write(dir, &format!("luk{n}.json"), &make_lukasiewicz(n).to_json().to_string())
}

#[test]
fn semiprimal_from_file() {
    let dir = TempDir::new().unwrap();
    let f = luk_file(dir.path(), 2);
    let o = mvcl(&["check-semiprimal", "--algebra", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("semi-primal: true"));
}

#[test]
fn non_semiprimal_exits_one_with_reproduction() {
    let o = mvcl(&["check-semiprimal", "--builtin", "chain:3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reproduce:"));
}

#[test]
fn deadlock_box_is_top() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "deadlock.json", r#"{"frame":{"points":["x"],"relation":[]},"props":{"p":{"x":"1/2"}}}"#);
    let o = mvcl(&["eval", "--model", m.to_str().unwrap(), "--formula", "(box p)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x: 1\n");
    let o = mvcl(&["--json", "eval", "--model", m.to_str().unwrap(), "--formula", "(diamond p)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["values"]["x"], "0");
}

#[test]
fn malformed_formula_reports_position() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", r#"{"frame":{"points":["x"],"relation":[]}}"#);
    let o = mvcl(&["eval", "--model", m.to_str().unwrap(), "--formula", "(box"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:5"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "bad.json", "{\"frame\": {\"points\": [\"x\",]}}");
    let o = mvcl(&["eval", "--model", m.to_str().unwrap(), "--formula", "p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn unknown_flag_is_rejected() {
    assert_eq!(mvcl(&["subalgebras", "--nope"]).status.code(), Some(2));
}

#[test]
fn lemma_tau_on_luk3() {
    let dir = TempDir::new().unwrap();
    let f = luk_file(dir.path(), 3);
    let o = mvcl(&["verify", "--theorem", "lemma-tau", "--algebra", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS lemma-tau"));
    assert!(stdout(&o).contains("4 valid maps"));
}

#[test]
fn verify_gates_non_semiprimal_bases() {
    let o = mvcl(&["--json", "verify", "--theorem", "one-step", "--builtin", "chain:3"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdicts"][0]["check"], "semi-primal");
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["--json", "verify", "--theorem", "one-step", "--max-points", "1", "--seed", "5"];
    let (a, b) = (mvcl(&args), mvcl(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn roundtrip_lift_and_dual() {
    let dir = TempDir::new().unwrap();
    let obj = write(dir.path(), "obj.json", r#"{"points":["a","b"],"marking":{"a":0}}"#);
    let obj = obj.to_str().unwrap();
    assert_eq!(mvcl(&["roundtrip", "--object", obj]).status.code(), Some(0));
    let o = mvcl(&["--json", "lift", "--functor", "powerset", "--object", obj]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["object"]["points"].as_array().unwrap().len(), 4);
    let o = mvcl(&["--json", "dual", "--object", obj]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 6);
}

#[test]
fn homs_between_builtins() {
    let o = mvcl(&["--json", "homs", "--from", "luk:2", "--to", "luk:4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // the only embedding sends 1/2 to 2/4
    assert_eq!(v["count"], 1);
}

#[test]
fn bisim_of_two_chains() {
    let dir = TempDir::new().unwrap();
    let two = write(dir.path(), "two.json", r#"{"frame":{"points":["a","b"],"relation":[["a","b"]]}}"#);
    let three = write(dir.path(), "three.json", r#"{"frame":{"points":["a","b","c"],"relation":[["a","b"],["b","c"]]}}"#);
    let o = mvcl(&["--json", "bisim", "--model", two.to_str().unwrap(), "--model2", three.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["theories_agree"], true);
    // roots differ, both leaves are deadlocks
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn hml_small_run() {
    let o = mvcl(&["hml", "--corpus-seed", "1", "--states", "1", "--pairs", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 disagreements"));
}
