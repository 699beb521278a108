use std::process::{Command, Output};

use serde_json::{json, Value};

fn hdk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdk")).args(args).env_remove("HDK_CONFIG").output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = hdk(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn err_json(args: &[&str], code: i32) -> Value {
    let out = hdk(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    serde_json::from_slice(&out.stderr).expect("JSON on stderr")
}

#[test]
fn factor() {
    assert_eq!(ok_json(&["factor", "12"]), json!({"2": 2, "3": 1}));
    assert_eq!(ok_json(&["factor", "-3/4"]), json!({"2": -2, "3": 1}));
    assert_eq!(err_json(&["factor", "0"], 1)["error"], "ZeroInput");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(err_json(&["bogus"], 2)["error"], "Usage");
    assert_eq!(err_json(&["factor", "x/y"], 2)["error"], "Usage");
    assert_eq!(err_json(&["approx", "--target", "2:1"], 2)["error"], "Usage");
    assert!(hdk(&["--help"]).status.success());
}

#[test]
fn ideal_operations() {
    assert_eq!(ok_json(&["ideal", "--op", "sum", "12", "18"]), json!({"2": 1, "3": 1}));
    assert_eq!(ok_json(&["ideal", "--op", "intersect", "12", "18"]), json!({"2": 2, "3": 2}));
    assert_eq!(ok_json(&["ideal", "--op", "crt", "--congruence", "1:8", "--congruence", "2:27"]), json!({"x": "137"}));
    assert_eq!(err_json(&["ideal", "--op", "radical", "1/2"], 1)["error"], "NonIntegral");
    let c = ok_json(&["ideal", "--op", "classify", "--ground", "2,3,5", "2:2"]);
    assert_eq!((c["prime"].clone(), c["maximal"].clone()), (json!(true), json!(false)));
}

#[test]
fn classification() {
    let f = ok_json(&["classify", "--divisor-filter", "--ground", "2,3,5", "--gen", "2:1"]);
    assert_eq!(f["maximal"], true);
    assert_eq!(f["star_radical"], true);
    let g = ok_json(&["classify", "--element", r#"{"geometric_partial":3}"#, "--place", "3"]);
    assert_eq!(g["class"], json!({"nearstandard": "-1/2"}));
    let l = ok_json(&["lattice", "classify", "--kind", "fin-subsets", "--ground", "all", "--frechet"]);
    assert_eq!(l["prime"], false);
}

#[test]
fn residues() {
    let r = ok_json(&["residue", "--support", "2,3,5,7", "--targets", "1,2,3,4"]);
    let vals: Vec<&str> = r["residues"].as_array().unwrap().iter().map(|v| v["value"].as_str().unwrap()).collect();
    assert_eq!(vals, ["1", "2", "3", "4"]);
    assert_eq!(err_json(&["residue", "--support", "2,3", "--x", "7", "--filter", "frechet"], 1)["error"], "UndecidableUltrafilter");
}

#[test]
fn valuations() {
    assert_eq!(ok_json(&["valuation", "--at", "m_5", "--of", "50"])["value"], json!([2]));
    let s = ok_json(&["valuation", "specialize", "--at", "m_2", "--segment", "1"]);
    assert_eq!(s["to"]["name"], "v|Z");
    let d = ok_json(&["valuation", "diagram", "--at", "m_2"]);
    assert_eq!(d["nodes"].as_object().unwrap().len(), 6);
    assert_eq!(d["edges"].as_array().unwrap().len(), 6);
    let dot = hdk(&["valuation", "diagram", "--at", "m_2", "--dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn value_groups() {
    assert_eq!(ok_json(&["valuegroup", "compare", "--a", r#"{"power_seq":2}"#, "--b", "5"])["order"], "greater");
    let e = ok_json(&["valuegroup", "embed", "--k", "3", "--witness", "cofinite:0,1", "--witness", "cofinite:7"]);
    assert_eq!(e["equal"], true);
}

#[test]
fn padic_and_approx() {
    let a = ok_json(&["padic", "--q", "12", "--p", "2", "--precision", "4"]);
    assert_eq!(a["result"], json!({"p": 2, "precision": 4, "val": 2, "unit": "3"}));
    assert_eq!(err_json(&["padic", "--q", "0", "--p", "2", "--op", "inv"], 1)["error"], "DivisionByZero");
    let x = ok_json(&["approx", "--target", "2:1:1/8", "--target", "3:2:1/27"]);
    assert_eq!(x["x"], "137");
    let y = ok_json(&["approx", "--target", "2:1:0.125", "--target", "3:2:0.037"]);
    assert!(y["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn adeles() {
    let a = ok_json(&["adele", "--x", "1/2", "--places", "2,inf", "--precision", "3"]);
    assert_eq!(a["tail"], "integral");
    assert!(a["exceptional"]["inf"].is_object());
    assert_eq!(err_json(&["adele", "--x", "1/2", "--places", "3"], 1)["error"], "NonIntegralTail");
    assert_eq!(err_json(&["adele", "--op", "inv", "--x", "10", "--places", "2,3"], 1)["error"], "NotAnIdele");
    let i = ok_json(&["adele", "--op", "inv", "--x", "-12", "--places", "2,3,inf"]);
    assert_eq!(i["tail_value"], "-1/12");
}

#[test]
fn suite_reports_are_stable() {
    let a = hdk(&["suite", "--module", "supp_ch"]);
    let b = hdk(&["suite", "--module", "supp_ch"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 0);
    assert_eq!(err_json(&["suite", "--module", "nope"], 2)["error"], "Usage");
}

#[test]
fn config_file_sets_defaults() {
    let dir = std::env::temp_dir().join(format!("hdk-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"precision": 2}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hdk")).args(["padic", "--q", "12", "--p", "2"]).env("HDK_CONFIG", &path).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["precision"], 2);
    std::fs::write(&path, r#"{"precison": 2}"#).unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_hdk")).args(["factor", "2"]).env("HDK_CONFIG", &path).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
