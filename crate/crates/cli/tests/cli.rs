use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critical-hl"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exponents_are_printed_exactly() {
    let j = stdout_json(&cli(&["exponents", "--m", "4", "--json"]));
    assert_eq!(j["exponents"], serde_json::json!(["inf", "4", "3", "12/5"]));
    assert_eq!(j["approx"][0], "inf");
    assert_eq!(j["constant"]["exponent"], "1");
    let text = String::from_utf8(cli(&["exponents", "--m", "3"]).stdout).unwrap();
    assert!(text.starts_with("s = (inf,3,12/5)\n"), "{text}");
}

#[test]
fn inclusion_and_admissibility() {
    let j = stdout_json(&cli(&[
        "inclusion",
        "--r",
        "2",
        "--p",
        "4/3,4/3",
        "--q",
        "3/2,3/2",
    ]));
    assert_eq!(j["s"], serde_json::json!(["3", "12/5"]));
    let bad = cli(&["inclusion", "--r", "2", "--p", "2,2", "--q", "2,3/2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("q_2"));
    let j = stdout_json(&cli(&[
        "admissible",
        "--p",
        "2",
        "--q",
        "2",
        "--a",
        "2",
        "--b",
        "inf",
    ]));
    assert_eq!(j["admissible"], true);
    let j = stdout_json(&cli(&[
        "admissible",
        "--p",
        "4",
        "--q",
        "4",
        "--a",
        "1",
        "--b",
        "inf",
    ]));
    assert_eq!(j["admissible"], false);
    assert_eq!(j["failed"][0], "inner-threshold");
}

#[test]
fn tensor_files_round_trip_through_norm_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t0.json");
    let p = path.to_str().unwrap();
    assert!(cli(&["form", "--form", "t0:n1=4,n2=9", "--out", p])
        .status
        .success());
    let op = stdout_json(&cli(&["norm", "op", "--tensor", p]));
    assert!((op["value"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(op["method"], "exact-singular");
    let mixed = stdout_json(&cli(&[
        "norm",
        "mixed",
        "--tensor",
        p,
        "--exponents",
        "inf,1",
    ]));
    assert_eq!(mixed["value"], 9.0);
    let op3 = stdout_json(&cli(&[
        "norm",
        "op",
        "--form",
        "dot:m=3,n=4",
        "--restarts",
        "4",
    ]));
    assert!((op3["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(op3["analytic"], 1.0);
}

#[test]
fn verify_writes_reports_and_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("v.csv");
    let out = cli(&[
        "verify",
        "--m",
        "3",
        "--n",
        "5",
        "--trials",
        "4",
        "--restarts",
        "4",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    let again = dir.path().join("w.csv");
    cli(&[
        "verify",
        "--m",
        "3",
        "--n",
        "5",
        "--trials",
        "4",
        "--restarts",
        "4",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&again).unwrap());

    let fail = cli(&[
        "verify",
        "--form",
        "dot:m=3,n=8",
        "--exponents",
        "3,inf,inf",
    ]);
    assert_eq!(fail.status.code(), Some(1));
}

#[test]
fn sharpness_reports_growth() {
    let derived = cli(&["sharpness", "--m", "3", "--format", "json"]);
    let j = stdout_json(&derived);
    assert!(j["growth"]["full"]["slope"].as_f64().unwrap().abs() < 0.01);
    let printed = cli(&["sharpness", "--m", "3", "--variant", "printed"]);
    assert_eq!(printed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&printed.stderr).contains("slope=0.0833333333333"));
    let short = cli(&["sharpness", "--sweep", "4,8"]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn remaining_experiments_run() {
    let j = stdout_json(&cli(&[
        "bilinear-law",
        "--form",
        "t0:n1=4,n2=64",
        "--a",
        "1",
        "--b",
        "inf",
        "--format",
        "json",
    ]));
    assert_eq!(j["records"][0]["ratio"], 1.0);
    assert!(
        cli(&["bilinear-law", "--a", "2", "--b", "2", "--trials", "5"])
            .status
            .success()
    );
    assert!(
        cli(&["base-hl", "--m", "3", "--trials", "3", "--restarts", "4"])
            .status
            .success()
    );
    assert_eq!(cli(&["base-hl", "--m", "2"]).status.code(), Some(2));
    let out = cli(&[
        "inclusion-instance",
        "--r",
        "2",
        "--p",
        "3/2,3/2",
        "--q",
        "3/2,3/2",
        "--samples",
        "2",
    ]);
    assert!(out.status.success());
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!cli(&["exponents", "--m", "3", "--variant", "bogus"])
        .status
        .success());
    assert!(!cli(&["norm", "op", "--form", "dot:m=3"]).status.success());
    assert!(!cli(&["norm", "op"]).status.success());
    assert!(
        !cli(&["verify", "--variant", "derived", "--exponents", "inf,3,3"])
            .status
            .success()
    );
}
