use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn aoukit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aoukit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn norm_prints_value() {
    let o = aoukit(&["norm", &path("linf2.json"), "--vector", "[1,-1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    let o = aoukit(&["norm", "lin_space(2)", "--vector", r#"["1/2", 1, -1]"#, "--format", "json"]);
    assert_eq!(json(&o)["norm"], "5/2");
}

#[test]
fn functional_bound() {
    let o = aoukit(&["norm", "linf(2)", "--functional", "[1,-2]", "--epsilon", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["interval_min"], "-2");
    assert_eq!(v["norm"], "3");
    assert_eq!(v["interval_side"], false);
    assert_eq!(v["agrees"], true);
}

#[test]
fn nuclear_pair_lin2() {
    let o = aoukit(&["nuclear-pair", &path("lin2.json"), &path("lin2.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["nuclear"], false);
    assert!(v["witness"]["coeffs"].is_array());
    assert_eq!(v["witness"]["certificate"]["verdict"], "non_member");
    let o = aoukit(&["nuclear-pair", "linf(2)", "linf(3)", "--format", "json"]);
    assert_eq!(json(&o)["nuclear"], true);
}

#[test]
fn nuclear_single_space() {
    let o = aoukit(&["nuclear", "lin_space(1)", "--format", "json"]);
    assert_eq!(json(&o)["nuclear"], true);
    let o = aoukit(&["nuclear", &path("lin2.json"), "--format", "json"]);
    assert_eq!(json(&o)["nuclear"], false);
}

#[test]
fn worked_examples_reproduce() {
    let o = aoukit(&["examples", "paper"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all examples reproduced"));
    let o = aoukit(&["examples", "paper", "--format", "json"]);
    assert_eq!(json(&o)["reproduced"], true);
}

#[test]
fn roundtrip_canonical() {
    let o = aoukit(&["roundtrip", &path("linf2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), std::fs::read_to_string(data("linf2.json")).unwrap());

    let o = aoukit(&["roundtrip", &path("half.json")]);
    let out = stdout(&o);
    assert!(out.contains("\"1/2\""));
    assert!(!out.contains("2/4") && !out.contains("3/6"));

    let o = aoukit(&["roundtrip", &path("open_halfplane.json"), "--format", "json"]);
    assert_eq!(json(&o)["cone"]["strict"], serde_json::json!([true]));
}

#[test]
fn roundtrip_is_idempotent() {
    for f in ["lin2.json", "contraction.json", "average.json", "diag.json"] {
        let first = stdout(&aoukit(&["roundtrip", &path(f)]));
        let tmp = std::env::temp_dir().join(format!("aoukit-cli-{}-{f}", std::process::id()));
        std::fs::write(&tmp, &first).unwrap();
        let second = stdout(&aoukit(&["roundtrip", tmp.to_str().unwrap()]));
        assert_eq!(first, second, "{f}");
    }
}

#[test]
fn map_verbs() {
    let o = aoukit(&["check-map", &path("contraction.json"), "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["report"]["unital"], true);
    assert_eq!(v["report"]["positive"], false);
    assert!(v["positivity_failure"]["certificate"]["witness"].is_array());

    let o = aoukit(&["pert", &path("contraction.json"), "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["matrix"], serde_json::json!([["1", "0"], ["0", "1"]]));
    assert_eq!(v["distance"], "1");

    let o = aoukit(&["perturb", &path("contraction.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));

    let o = aoukit(&["quotient", &path("average.json"), "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["order_quotient"], true);
    assert_eq!(v["liftings"].as_array().unwrap().len(), 6);
}

#[test]
fn space_verbs() {
    let o = aoukit(&["validate", &path("open_halfplane.json"), "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["report"]["archimedean"], false);
    assert_eq!(v["report"]["archimedean_witness"], serde_json::json!(["0", "1"]));

    let o = aoukit(&["archimedeanize", &path("open_halfplane.json"), "--format", "json"]);
    assert_eq!(json(&o)["validation"]["aou"], true);

    let o = aoukit(&["states", "lin_space(1)", "--format", "json"]);
    assert_eq!(json(&o)["count"], 2);

    let o = aoukit(&["auerbach", "linf(2)", "--format", "json"]);
    assert_eq!(json(&o)["duals"], serde_json::json!([["1/2", "1/2"], ["1/2", "-1/2"]]));

    let o = aoukit(&["quotient", "linf(2)", "--ideal", "[[1,0]]", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["order_ideal"]["ideal"], true);
    assert_eq!(v["quotient"]["dim"], 1);

    let o = aoukit(&["quotient", "linf(2)", "--ideal", "[[1,1]]", "--format", "json"]);
    assert_eq!(json(&o)["order_ideal"]["ideal"], false);
}

#[test]
fn tensor_verbs() {
    let o = aoukit(&["tensor-norm", &path("diag.json")]);
    assert_eq!(stdout(&o).trim(), "3");
    let o = aoukit(&["tensor-member", &path("diag.json"), "--kind", "pi", "--format", "json"]);
    assert_eq!(json(&o)["pi"]["verdict"], "non_member");
}

#[test]
fn extend_verb() {
    // From span{e} in linf(2) into linf(1).
    let o = aoukit(&[
        "extend", "--space", "linf(2)", "--target", "linf(1)", "--basis", "[[1,1]]", "--values", "[[1]]", "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["extends"], true);
    // e must go to e; asking for 2 is infeasible and reported with Farkas multipliers.
    let o = aoukit(&[
        "extend", "--space", "linf(2)", "--target", "linf(1)", "--basis", "[[1,1]]", "--values", "[[2]]", "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["extends"], false);
    assert!(v["farkas"].is_array());
}

#[test]
fn factorize_verb() {
    let o = aoukit(&["factorize", "linf(3)", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["met"], true);
    assert_eq!(v["best"]["defect"], "0");
    let o = aoukit(&["factorize", "lin_space(2)", "--epsilon", "1/10", "--format", "json"]);
    let v = json(&o);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(v["met"], false);
    assert_eq!(v["cap"], 4);
}

#[test]
fn exit_codes() {
    assert_eq!(aoukit(&["bogus"]).status.code(), Some(1));
    assert_eq!(aoukit(&["norm", "linf(2)"]).status.code(), Some(1));
    assert_eq!(aoukit(&["validate", "linf(2)", "--nope"]).status.code(), Some(1));
    assert_eq!(aoukit(&["--help"]).status.code(), Some(0));

    let o = aoukit(&["norm", "linf(2)", "--vector", "[1]", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "invalid_input");
    assert_eq!(aoukit(&["validate", "/nonexistent/space.json"]).status.code(), Some(2));
    assert_eq!(aoukit(&["pert", &path("average.json")]).status.code(), Some(0));

    let bad = std::env::temp_dir().join(format!("aoukit-cli-v2-{}.json", std::process::id()));
    std::fs::write(&bad, r#"{"version":2,"label":"x","dim":1,"unit":["1"],"cone":{"rep":"generators","rows":[["1"]]}}"#)
        .unwrap();
    assert_eq!(aoukit(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    let bad = std::env::temp_dir().join(format!("aoukit-cli-junk-{}.json", std::process::id()));
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(aoukit(&["roundtrip", bad.to_str().unwrap()]).status.code(), Some(2));
    let sum = std::env::temp_dir().join(format!("aoukit-cli-sum-{}.json", std::process::id()));
    std::fs::write(&sum, r#"{"version":1,"source":"linf(2)","target":"linf(1)","matrix":[["1","1"]]}"#).unwrap();
    let o = aoukit(&["pert", sum.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["message"], "map is not unital");
}
