//! End-to-end checks of the binary: exit codes, diagnostics, output shape,
//! and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_carshare"))
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn run_gba_on_worst_case_fixture() {
    let out = run(&["run", "--alg", "gba", "--instance", &fixture("thm6_k4"), "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ratio"], "4/3");
    assert_eq!(v["alg"], "6");
    assert_eq!(v["opt"], 8);
}

#[test]
fn run_expected_mode_needs_no_seed() {
    let out = run(&["run", "--alg", "prgba", "--instance", &fixture("prgba_k5"), "--expected"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["alg"], "15/2");
    assert_eq!(v["ratio"], "4/3");
}

#[test]
fn distinct_validation_diagnostics() {
    // unknown policy
    let out = run(&["run", "--alg", "greedy", "--instance", &fixture("thm6_k4")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown policy `greedy`"), "{}", stderr(&out));

    // missing seed for a randomized policy
    let out = run(&["run", "--alg", "prgba", "--instance", &fixture("prgba_k5")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--seed is required"), "{}", stderr(&out));

    // malformed instance JSON names the field
    let mut tmp = tempfile::NamedTempFile::new().unwrap();
    writeln!(tmp, r#"{{"k": 1, "model": "S", "stages": [{{"il": 1, "ir": 1}}]}}"#).unwrap();
    let out = run(&["run", "--alg", "gba", "--instance", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("`k` must be at least 2"), "{}", stderr(&out));
}

#[test]
fn opt_subcommand_prints_witness() {
    let out = run(&["opt", "--instance", &fixture("opt_k4")]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["profit"], 8);
    assert_eq!(v["schedule"].as_array().unwrap().len(), 2);
}

#[test]
fn adversary_headline_numbers() {
    let out = run(&["adversary", "--theorem", "9", "--alg", "agba", "--k", "20", "--R", "11/10"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ratio"], "31/30");

    // decimal R parses exactly
    let out2 = run(&["adversary", "--theorem", "9", "--alg", "agba", "--k", "20", "--R", "1.1"]);
    assert_eq!(stdout(&out), stdout(&out2));

    let out = run(&["adversary", "--theorem", "6", "--alg", "gba", "--k", "4", "--format", "csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("6,gba,4,,6,8,4/3,"), "{}", stdout(&out));
}

#[test]
fn adversary_contract_errors() {
    // randomized policy against the deterministic-only construction
    let out = run(&["adversary", "--theorem", "6", "--alg", "prgba", "--k", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("deterministic"), "{}", stderr(&out));

    // model mismatch
    let out = run(&["adversary", "--theorem", "7", "--alg", "gba", "--k", "4"]);
    assert_eq!(out.status.code(), Some(1));

    // non-integral R*k
    let out = run(&["adversary", "--theorem", "9", "--alg", "agba", "--k", "7", "--R", "11/10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("integer"), "{}", stderr(&out));
}

#[test]
fn exhaustive_budget_exit_code() {
    let out = run(&["exhaustive", "--alg", "gba", "--k", "2", "--stages", "2", "--cap", "4", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds budget"), "{}", stderr(&out));

    let out = run(&["exhaustive", "--alg", "gba", "--k", "2", "--stages", "2", "--cap", "4", "--budget", "1000000"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ratio"], "4/3");
}

#[test]
fn sweep_is_sorted_and_deterministic() {
    let args = ["sweep", "--alg", "gba", "--theorem", "6", "--k-min", "2", "--k-max", "6", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "policy,k,R,ratio,ratio_decimal");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("gba,2,,4/3"));
    assert!(lines[2].starts_with("gba,3,,3/2"));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["run", "--alg", "prargba", "--instance", &fixture("thm8_k2"), "--seed", "99"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn targeted_verify_against_bundled_fixture() {
    let out = run(&["verify", "--alg", "prgba", "--k", "5", "--trials", "20000", "--seed", "42"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exact"], "15/2");
    assert_eq!(v["within_3se"], true);
    assert_eq!(v["fixture"], "prgba_k5");

    // no fixture for this pair
    let out = run(&["verify", "--alg", "prgba", "--k", "17", "--trials", "10", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no bundled fixture"), "{}", stderr(&out));
}
