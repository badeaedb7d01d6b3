use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn amlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut a = args.to_vec();
    let ps = path.to_str().unwrap();
    a.extend(["--json", ps]);
    let out = amlab(&a);
    let v = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    (out.status.code().unwrap(), v)
}

#[test]
fn rational_points_p3() {
    let (code, v) = json_of(&["count", "--p", "3", "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "amlab/1");
    assert_eq!(v["command"], "count");
    assert_eq!(v["report"]["counts"][0]["points"], 6);
}

#[test]
fn genus_of_cover() {
    let (code, v) = json_of(&["genus", "--p", "5", "--cover", "2x + 1/x"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["genus"]["value"], 4);
    assert_eq!(v["report"]["p_rank"]["value"], 4);
}

#[test]
fn verify_theorem_p3_passes() {
    let (code, v) = json_of(&["verify-theorem", "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["passed"], true);
    assert!(v["report"]["checks"].as_array().unwrap().len() >= 9);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = amlab(&["verify-theorem", "--p", "5", "--seed", "7", "--json", path.to_str().unwrap()]);
        assert!(out.status.code().is_some());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn json_to_stdout() {
    let out = amlab(&["count", "--p", "5", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["counts"][0]["points"], 10);
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = amlab(&["count", "--p", "3", "--k", "2", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&path).unwrap(), "k,count\n1,6\n2,24\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(amlab(&["genus", "--p", "5", "--cover", "2x +* 1"]).status.code(), Some(2));
    assert_eq!(amlab(&["count", "--p", "9"]).status.code(), Some(2));
    assert_eq!(amlab(&["count", "--c", "3", "--p", "3"]).status.code(), Some(2));
    assert_eq!(amlab(&["genus", "--p", "5"]).status.code(), Some(2));
    assert_eq!(amlab(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_3_with_partial_counts() {
    let (code, v) = json_of(&["count", "--p", "3", "--k", "6", "--budget", "100"]);
    assert_eq!(code, 3);
    assert_eq!(v["report"]["partial"]["counts"].as_array().unwrap().len(), 4);
    assert_eq!(v["report"]["budget_exceeded"]["needed"], 243);
}

#[test]
fn aut_check_and_orbits() {
    let (code, v) = json_of(&["aut-check", "--p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["non_automorphisms"]["rejected"], 100);
    let (code, v) = json_of(&["orbits", "--p", "3", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["orbit_sizes"], serde_json::json!([3, 3, 9, 9]));
}

#[test]
fn zeta_of_curve_and_cover() {
    let (code, v) = json_of(&["zeta", "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["l_coefficients"][8], "81");
    let (code, v) = json_of(&["zeta", "--p", "3", "--cover", "x + 1/x"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["genus_from_zeta"], 2);
}
