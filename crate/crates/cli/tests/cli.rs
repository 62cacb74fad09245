use std::process::Command;

use serde_json::Value;

fn hkwall() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hkwall"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = hkwall().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "stderr: {stderr}");
    serde_json::from_str(stdout.trim()).unwrap()
}

fn lines(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn wall_test_sample() {
    let v = json(&["wall-test", "--epsilon", "0", "--k", "2", "--p", "2", "--delta", "0"]);
    assert_eq!(v["is_wall"], true);
    assert_eq!(v["q_R"], "-5/2");
    assert_eq!(v["t_gram"], serde_json::json!([-2, 1, 1, 2]));
    assert!(v["witness"].is_object());
    assert!(v["witness"]["mukai"].is_array());
}

#[test]
fn wall_test_with_oracle() {
    let v = json(&["wall-test", "--epsilon", "1", "--k", "4", "--p", "7", "--delta", "0", "--oracle"]);
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn wall_test_curve_and_divisor_agree() {
    let a = json(&["wall-test", "--epsilon", "0", "--k", "2", "--p", "2", "--curve", "1,-3"]);
    let b = json(&["wall-test", "--epsilon", "0", "--k", "2", "--p", "2", "--divisor", "2,-3"]);
    assert_eq!(a["is_wall"], b["is_wall"]);
    assert_eq!(a["t_gram"], b["t_gram"]);
}

#[test]
fn nonnegative_divisor_is_not_a_wall() {
    let v = json(&["wall-test", "--epsilon", "0", "--k", "2", "--p", "2", "--delta", "2"]);
    assert_eq!(v["is_wall"], false);
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn exists_sample() {
    let v = json(&["exists", "--epsilon", "0", "--k", "2", "--p", "6", "--delta", "0"]);
    assert_eq!(v["exists"], false);
    assert_eq!(v["alpha"], 3);
}

#[test]
fn square_rewrite_agrees() {
    let v = json(&["square", "--epsilon", "1", "--k", "3", "--p", "5", "--delta", "1"]);
    assert_eq!(v["q_R"], v["alternate"]);
}

#[test]
fn rationals_are_strings_with_denominator() {
    let v = json(&["class", "--epsilon", "0", "--k", "3", "--p", "4", "--delta", "1"]);
    assert_eq!(v["q_R"], "-1/4");
    assert_eq!(v["q_D"], "-4/1");
    assert_eq!(v["divisor_div"], 4);
}

#[test]
fn validation_errors_exit_2_with_one_line() {
    for args in [
        &["exists", "--epsilon", "2", "--k", "2", "--p", "6", "--delta", "0"][..],
        &["exists", "--epsilon", "0", "--k", "1", "--p", "6", "--delta", "0"],
        &["exists", "--epsilon", "0", "--k", "2", "--p", "1", "--delta", "0"],
        &["exists", "--epsilon", "1", "--k", "2", "--p", "6", "--delta", "5"],
        &["scan", "--k", "3..2", "--p", "2..4"],
        &["scan", "--k", "x", "--p", "2..4"],
        &["wall-test", "--epsilon", "0", "--k", "2", "--p", "2"],
    ] {
        let (code, stdout, stderr) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(stdout.is_empty());
        assert_eq!(stderr.trim().lines().count(), 1, "{stderr}");
    }
    let (_, _, stderr) = run(&["exists", "--epsilon", "1", "--k", "2", "--p", "6", "--delta", "5"]);
    assert!(stderr.contains("δ ≤ p−2ε"), "{stderr}");
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["exists", "--k", "2"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn catalog_records_have_exact_fields() {
    let (code, stdout, _) = run(&["catalog", "--epsilon", "0", "--k", "3"]);
    assert_eq!(code, 0);
    let recs = lines(&stdout);
    assert!(!recs.is_empty());
    let mut ids = std::collections::HashSet::new();
    for r in &recs {
        let mut keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(
            keys,
            ["delta", "epsilon", "gram", "is_wall", "isometry_class_id", "k", "p", "q_R", "witness"]
        );
        assert!(ids.insert(r["isometry_class_id"].as_str().unwrap().to_string()));
        assert_eq!(r["is_wall"], !r["witness"].is_null());
    }
}

#[test]
fn catalog_output_respects_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let status = hkwall()
        .args(["catalog", "--epsilon", "1", "--k", "2", "--output", "cat.jsonl"])
        .env("HKWALL_OUTPUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("cat.jsonl")).unwrap();
    assert!(!lines(&text).is_empty());
}

#[test]
fn absolute_output_ignores_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let other = tempfile::tempdir().unwrap();
    let target = dir.path().join("x.json");
    let status = hkwall()
        .args(["lagrangian", "--epsilon", "0", "--k", "3", "--output"])
        .arg(&target)
        .env("HKWALL_OUTPUT_DIR", other.path())
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(std::fs::read_to_string(&target).unwrap().trim()).unwrap();
    assert_eq!(v["q_R"], v["minimal_square"]);
    assert_eq!(v["moduli_dim"], 0);
}

#[test]
fn coisotropic_families() {
    let v = json(&["coisotropic", "--epsilon", "0", "--k", "3", "--p", "5", "--delta", "1"]);
    assert_eq!(v["bundle"]["source"], "projective_bundle");
    for d in v["symmetric"].as_array().unwrap().iter().chain(v["severi"].as_array().unwrap()) {
        assert_eq!(d["total_dim"].as_i64().unwrap(), 6 - d["codim"].as_i64().unwrap());
    }
    assert_eq!(run(&["coisotropic", "--epsilon", "0", "--k", "3", "--p", "5", "--family", "bundle"]).0, 2);
}

#[test]
fn scan_is_sorted_and_consistent() {
    for check in ["equivalence", "thm51", "bound", "square", "mbm", "oracle"] {
        let (code, stdout, stderr) = run(&["scan", "--k", "2..4", "--p", "2..12", "--check", check]);
        assert_eq!(code, 0, "{stderr}");
        let recs = lines(&stdout);
        assert!(!recs.is_empty());
        let keys: Vec<[i64; 4]> = recs
            .iter()
            .map(|r| ["epsilon", "k", "p", "delta"].map(|f| r[f].as_i64().unwrap()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(recs.iter().all(|r| r["consistent"] == true), "{check}");
    }
}

#[test]
fn scan_flagship_example() {
    let (code, stdout, _) = run(&["scan", "--epsilon", "0", "--k", "2..4", "--p", "2..20", "--check", "thm51"]);
    assert_eq!(code, 0);
    let recs = lines(&stdout);
    assert!(recs.len() > 50);
    assert!(recs.iter().all(|r| r["consistent"] == true && r["epsilon"] == 0));
}

#[test]
fn coisotropic_codim_filter() {
    let v = json(&["coisotropic", "--epsilon", "0", "--k", "4", "--p", "9", "--family", "symmetric", "--r", "2..3"]);
    let list = v["symmetric"].as_array().unwrap();
    assert!(!list.is_empty());
    assert!(list.iter().all(|d| (2..=3).contains(&d["codim"].as_i64().unwrap())));
}

#[test]
fn output_is_deterministic_and_rationals_round_trip() {
    let args = ["scan", "--k", "2..3", "--p", "2..15", "--check", "square"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    for r in lines(&a) {
        let q = r["q_R"].as_str().unwrap();
        let (n, d) = q.split_once('/').unwrap();
        let (n, d): (i64, i64) = (n.parse().unwrap(), d.parse().unwrap());
        assert!(d > 0);
        assert_eq!(gcd(n.abs(), d), 1);
        assert_eq!(format!("{n}/{d}"), q);
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}
