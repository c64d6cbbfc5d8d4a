use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbhier")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn normalize_double_integral() {
    let o = run(&["normalize", "A1 A1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1 A1 - A1 x1");
}

#[test]
fn latex_output() {
    let o = run(&["normalize", "A1 A1", "--latex"]);
    assert_eq!(stdout(&o), r"x_1\int^{x_1} - \int^{x_1} x_1");
}

#[test]
fn json_output_round_trips_through_normalize() {
    let o = run(&["normalize", "A2 A1", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], "rbhier/normal-form/v1");
    let expr = doc["expr"].to_string();
    let again = run(&["normalize", &expr]);
    assert_eq!(stdout(&again), stdout(&run(&["normalize", "A2 A1"])));
}

#[test]
fn apply_integral_to_one() {
    assert_eq!(stdout(&run(&["apply", "A1", "--to", "1"])), "x1");
    assert_eq!(stdout(&run(&["apply", "T(1; 1)*", "--to", "x^2"])), "x2^2 + 2*x1*x2 + x1^2");
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rbhier"))
        .args(["normalize", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"E(1)* A1").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "0");
}

#[test]
fn parse_errors_exit_64() {
    let o = run(&["normalize", "A1 )"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:4"));
    assert_eq!(run(&["apply", "A1", "--to", "exp(x1*x2)"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["verify", "--rules", "--axioms"]).status.code(), Some(64));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn budget_exhaustion_is_a_failure() {
    let o = run(&["normalize", "A2 A1", "--budget", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("partial"));
}

#[test]
fn verify_rules_small() {
    let o = run(&["verify", "--rules", "--trials", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["results"].as_array().unwrap().len(), 9);
}

#[test]
fn probe_exit_code_tracks_agreement() {
    let o = run(&["probe", "--trials", "0", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    // seed 0 at this size contains a known strategy disagreement
    let o = run(&["probe", "--trials", "200"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("agreement"));
}

#[test]
fn probe_is_deterministic() {
    let a = run(&["probe", "--trials", "30", "--seed", "5", "--json"]);
    let b = run(&["probe", "--trials", "30", "--seed", "5", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}
