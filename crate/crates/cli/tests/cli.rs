use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perfval"))
        .args(args)
        .env_remove("PERFVAL_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), v)
}

#[test]
fn pullback_batch_passes() {
    let (code, v) = json(&["check", "pullback", "--prime", "2", "--trials", "200", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], 200);
    assert_eq!(v["reports"].as_array().unwrap().len(), 200);
}

#[test]
fn length_of_diagonal_presentation() {
    let (code, v) = json(&["length", "fp", "--matrix", &data("diag.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lambda"], "3/4");
}

#[test]
fn non_power_of_p_exponent_is_an_input_error() {
    let (code, v) = json(&["length", "fp", "--matrix", &data("diag_p6.json")]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("1/3"));
}

#[test]
fn ledger_has_zero_cokernel() {
    let (code, v) = json(&[
        "purity", "ledger", "--extension", &data("kummer_mixed.json"), "--b", "1*p^(1/9)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lambda_Nb"], "0");
    assert_eq!(v["result"]["lambda_bB"], "4/9");
    assert_eq!(v["result"]["lambda_bpC"], "4/3");
}

#[test]
fn ledger_precision_loss_exits_3() {
    let out = run(&[
        "purity", "ledger", "--extension", &data("kummer_mixed.json"), "--b", "1*p^(1/9)",
        "--precision", "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precision"));
}

#[test]
fn tower_and_frobenius() {
    let (code, v) = json(&["purity", "tower", "--extension", &data("artin_schreier.json"), "--n-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["discriminants"], serde_json::json!(["1", "1/2", "1/4", "1/8"]));
    let (code, _) = json(&["purity", "frobsurj", "--extension", &data("artin_schreier.json"), "--samples", "10"]);
    assert_eq!(code, 0);
    let (code, _) = json(&[
        "purity", "frobsurj", "--extension", &data("kummer_mixed.json"), "--mode", "mixed",
        "--prime", "3", "--precision", "2", "--samples", "10",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn section_solve_and_lift() {
    let (code, v) = json(&["section", "solve", "--problem", &data("section.json"), "--lift", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["delta_min"], "1/4");
    assert_eq!(v["result"]["bound"], "3/4");
    let (code, _) = json(&["section", "solve", "--problem", &data("section_singular.json")]);
    assert_eq!(code, 1);
}

#[test]
fn cut_literal_and_file() {
    let (code, v) = json(&["length", "cut", "--cut", &data("cut.json"), "--b-valuation", "3/4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lambda"], "3/2");
    assert_eq!(v["result"]["lambda_bM"], "1/4");
    let (_, w) = json(&["length", "cut", "--cut", r#"[{"r": "1/4", "endpoint": "closed"}]"#]);
    assert_eq!(w["result"]["lambda"], "1/4");
}

#[test]
fn other_checks_pass() {
    assert_eq!(json(&["check", "additivity", "--trials", "30"]).0, 0);
    assert_eq!(json(&["check", "flatness", "--prime", "3", "--jmax", "4"]).0, 0);
    assert_eq!(json(&["tilt", "--prime", "3", "--depth", "2", "--samples", "20"]).0, 0);
    let (code, v) = json(&["tilt", "--components", "1*p^(1/2); 1*p^(1/4)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["val_flat"], "1/2");
}

#[test]
fn ring_eval_ops() {
    let (code, v) = json(&["ring", "eval", "1 + 1*t^(1/2)", "--op", "mul", "--with", "1*t^(1/4)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["result"]["value"], "1*t^(1/4) + 1*t^(3/4)");
    assert_eq!(v["result"]["result"]["valuation"], "1/4");
    let (code, _) = json(&["ring", "eval", "1*t^(1/2)", "--op", "invert"]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(json(&["length", "fp", "--matrix", &data("malformed.json")]).0, 2);
    assert_eq!(json(&["length", "fp", "--matrix", &data("missing.json")]).0, 2);
    assert_eq!(json(&["ring", "eval", "1 +"]).0, 2);
}

#[test]
fn output_is_deterministic_and_seeded() {
    let args = ["--format", "json", "check", "pullback", "--trials", "20"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let explicit = run(&["--format", "json", "--seed", "7", "check", "pullback", "--trials", "20"]).stdout;
    assert_eq!(a, explicit, "default seed is 7");
    let env = Command::new(env!("CARGO_BIN_EXE_perfval"))
        .args(args)
        .env("PERFVAL_SEED", "11")
        .output()
        .unwrap()
        .stdout;
    let v: Value = serde_json::from_slice(&env).unwrap();
    assert_eq!(v["result"]["seed"], 11);
    let flag = Command::new(env!("CARGO_BIN_EXE_perfval"))
        .args(["--seed", "13", "--format", "json", "check", "pullback", "--trials", "2"])
        .env("PERFVAL_SEED", "11")
        .output()
        .unwrap()
        .stdout;
    let v: Value = serde_json::from_slice(&flag).unwrap();
    assert_eq!(v["result"]["seed"], 13, "the flag wins over the environment");
}
