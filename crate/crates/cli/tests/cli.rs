use std::process::{Command, Output};

use serde_json::Value;

fn cdset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdset"))
        .args(args)
        .output()
        .expect("cdset binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, Option<i32>) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = cdset(&full);
    let last = stdout(&out).lines().last().unwrap().to_string();
    (serde_json::from_str(&last).unwrap(), out.status.code())
}

#[test]
fn density_formula_prints_fraction() {
    let out = cdset(&["density-formula", "2", "4", "5", "10", "20"]);
    assert_eq!(stdout(&out), "19/20\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_cd_reports_violation() {
    let (v, code) = json(&["check-cd", "0:2", "0:4"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["results"]["cd"], Value::Bool(false));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["status"], "ok");
}

#[test]
fn check_cd_density_for_45() {
    let out = cdset(&["check-cd", "0:5", "2:3", "4:9", "6:15", "16:45"]);
    let text = stdout(&out);
    assert!(text.contains("29/45"), "{text}");
}

#[test]
fn malformed_congruence_is_usage_error() {
    assert_eq!(cdset(&["check-cd", "5:3"]).status.code(), Some(2));
    assert_eq!(cdset(&["check-cd", "x"]).status.code(), Some(2));
    assert_eq!(cdset(&["density-formula", "1"]).status.code(), Some(2));
}

#[test]
fn decide_verdicts() {
    let (v, code) = json(&["decide", "--n", "20"]);
    assert_eq!(v["results"]["status"], "infeasible");
    assert_eq!(code, Some(0));
    let (v, _) = json(&["decide", "--moduli", "3", "6", "12", "18", "30", "42"]);
    assert_eq!(v["results"]["status"], "infeasible");
    let (v, _) = json(&["decide", "--n", "27"]);
    assert_eq!(v["results"]["status"], "feasible");
}

#[test]
fn exhausted_budget_exits_3() {
    let out = cdset(&[
        "decide", "--moduli", "3", "6", "12", "18", "30", "42", "--budget", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("budget_exceeded"));
}

#[test]
fn construct_exit_codes() {
    assert_eq!(cdset(&["construct", "45"]).status.code(), Some(0));
    assert_eq!(cdset(&["construct", "12"]).status.code(), Some(1));
    assert_eq!(cdset(&["construct", "30"]).status.code(), Some(2));
}

#[test]
fn report_for_failing_n_explains() {
    let out = cdset(&["report", "20"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("FailsLemma3"), "{text}");
}

#[test]
fn scan_json_streams_entries_then_summary() {
    let out = cdset(&["--json", "scan", "--max", "30"]);
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 30);
    assert!(lines[..29].iter().all(|l| l["kind"] == "scan_entry"));
    assert_eq!(lines[29]["results"]["counterexamples"], 0);
}

#[test]
fn verify_paper_passes_and_fault_is_caught() {
    let ok = cdset(&["verify-paper"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(!stdout(&ok).contains("FAIL"));
    let bad = cdset(&["verify-paper", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL n20_formula_density"));
}
