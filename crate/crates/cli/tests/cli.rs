use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grouplike")).args(args).output().unwrap()
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grouplike")).args(args).env(key, val).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn nct_tensor_closed_form() {
    let o = run(&["nct-tensor", "--p1", "2", "--q1", "1", "--p2", "3", "--q2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["mult"], 1);
    assert_eq!(j["p"], 6);
    assert_eq!(j["q"], 5);
    assert_eq!(j["alpha"], "3*a1+2*a2");
    assert_eq!(j["primitive"], true);
}

#[test]
fn nct_tensor_vanishing_and_negative_inputs() {
    let o = run(&["nct-tensor", "--p1", "0", "--q1", "1", "--alpha1", "0", "--p2", "0", "--q2", "1", "--alpha2", "2*pi/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["mult"], 0);
    let o = run(&["nct-tensor", "--p1", "-1", "--q1", "0", "--p2", "1", "--q2", "0"]);
    let j = json(&o);
    assert_eq!((j["p"].clone(), j["alpha"].clone()), (Value::from(1), Value::from("-a1+a2")));
}

#[test]
fn non_coprime_is_input_error() {
    let o = run(&["nct-tensor", "--p1", "2", "--q1", "2", "--p2", "3", "--q2", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["error"].as_str().unwrap().contains("not coprime"));
}

#[test]
fn oracle_sweep_agrees() {
    let o = run(&["oracle-compare", "--sweep", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["pairs"], j["agreed"]);
    assert_eq!(j["classes"], 240);
}

#[test]
fn validate_reports_witness() {
    let o = run(&["validate", data("broken.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert_eq!(j["valid"], false);
    assert_eq!(j["violations"][0]["witness"], serde_json::json!(["g", "f"]));
    let o = run(&["validate", data("z2_swap.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["isotropy"], serde_json::json!(["Z2", "1"]));
}

#[test]
fn invalid_action_is_a_failed_check() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"group": {"cyclic": 2}, "carrier": ["a", "b"], "act": [[0, "a", "b"], [0, "b", "a"], [1, "a", "a"], [1, "b", "b"]]}"#,
    )
    .unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["validate", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("junk.json");
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(run(&["validate", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn morita_footnote() {
    let o = run(&["morita", data("bz2.json").to_str().unwrap(), data("two_points.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert!(j["obstruction"]["differences"][1].as_str().unwrap().contains("{Z2} vs {1,1}"));
    assert_eq!(j["algebras"]["leftDim"], 2);
    assert_eq!(j["algebras"]["rightCommutative"], true);
}

#[test]
fn morita_with_bibundle() {
    let b = data("bz2.json");
    let o = run(&["morita", b.to_str().unwrap(), b.to_str().unwrap(), "--bibundle", data("bz2_identity.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verified"], true);
}

#[test]
fn compose_identity_bibundles() {
    let p = data("bz2_identity.json");
    let o = run(&["compose-bibundles", p.to_str().unwrap(), p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["size"], 2);
}

#[test]
fn stacky_check_and_mutation() {
    assert_eq!(run(&["stacky-check", "--family", "quotient"]).status.code(), Some(0));
    let o = run(&["stacky-check", "--family", "trivial:3", "--mutate", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert!(j["mutation"].is_string());
    assert!(j["report"]["checks"].as_array().unwrap().iter().any(|c| c["passed"] == false && c["witness"].is_string()));
}

#[test]
fn budget_exhaustion_is_explicit() {
    let o = run_env(&["stacky-check", "--family", "quotient"], "GROUPLIKE_BUDGET", "1");
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn hopfish_and_module_tensor() {
    assert_eq!(run(&["hopfish", "--family", "trivial:3"]).status.code(), Some(0));
    let o = run(&["tensor-mod", "--family", "trivial:4", "--left", "point:3", "--right", "point:2", "--expect", "point:1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn zigzag_variants() {
    assert_eq!(run(&["zigzag", "--dim", "4"]).status.code(), Some(0));
    assert_eq!(run(&["zigzag", "--random", "6", "--seed", "9"]).status.code(), Some(0));
    let o = run(&["zigzag", "--file", data("plane.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["relations"][1]["flags"]["lagrangian"], true);
    assert_eq!(run(&["zigzag", "--dim", "3"]).status.code(), Some(2));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.svg");
    let o = run(&["plot", "--circle", "2,1,0", "--circle", "2,1,0", "--compose", "--svg", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["circles"].as_array().unwrap().len(), 2);
    let svg = std::fs::read_to_string(&p).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["stacky-check", "--family", "bz:2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["zigzag", "--random", "4", "--seed", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
