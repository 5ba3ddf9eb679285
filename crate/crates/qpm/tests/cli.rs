use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn qpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpm")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn charpoly_of_vamos() {
    let out = qpm(&["charpoly", "--in", &path("vamos.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["charpoly"]["display"], "z^4 - 255z^3 + 21590z^2 - 776920z + 755584");
}

#[test]
fn weights_of_the_example_code_agree_with_enumeration() {
    let out = qpm(&["weights", "--in", &path("self_dual_633.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["agrees"], true);
    assert_eq!(v["distribution"], v["dual_distribution"]);
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(qpm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qpm(&["charpoly", "--in", "/nonexistent/file.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"q": 2, "n": 2, "r": 1, "table": [0, 1]}"#).unwrap();
    assert_eq!(qpm(&["charpoly", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn design_verify_distinguishes_designs() {
    let ok = qpm(&["design-verify", "--in", &path("spread4.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_of(&ok)["blocks"], 5);

    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(data("spread4.json")).unwrap()).unwrap();
    v["blocks"].as_array_mut().unwrap().pop();
    if let Some(w) = v.get_mut("weights").and_then(Value::as_array_mut) {
        w.pop();
    }
    std::fs::write(&partial, v.to_string()).unwrap();
    assert_eq!(qpm(&["design-verify", "--in", partial.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn dual_of_dual_is_the_code() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    assert!(qpm(&["dual", "--in", &path("constant_weight.json"), "--out", once.to_str().unwrap()]).status.success());
    assert_eq!(
        std::fs::read_to_string(&once).unwrap(),
        std::fs::read_to_string(data("constant_weight_dual.json")).unwrap()
    );
    assert!(qpm(&["dual", "--in", once.to_str().unwrap(), "--out", twice.to_str().unwrap()]).status.success());
    let a = json_of(&qpm(&["weights", "--in", &path("constant_weight.json")]));
    let b = json_of(&qpm(&["weights", "--in", twice.to_str().unwrap()]));
    assert_eq!(a["distribution"], b["distribution"]);
}

#[test]
fn macwilliams_and_contraction() {
    let out = qpm(&["macwilliams", "--in", &path("uniform_2_5.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["checks"].as_array().unwrap().len(), 6);

    let out = qpm(&["contract", "--in", &path("uniform_2_5.json"), "--space", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["dim"], 4);
}

#[test]
fn am_check_certifies_uniform_designs() {
    let out = qpm(&["am-check", "--in", &path("uniform_2_5.json"), "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["report"]["range_applies"], true);
    assert!(!v["certificates"].as_array().unwrap().is_empty());
}

#[test]
fn selftest_passes() {
    let out = qpm(&["selftest"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}
