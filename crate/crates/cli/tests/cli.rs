use std::process::Command as Process;

use serde_json::Value;
use specht_cli::{main_with_args, EXIT_CONSISTENCY, EXIT_INPUT, EXIT_OK};
use specht_invariants::combinatorics::StandardTableau;
use specht_invariants::exact_linalg::Rational;
use specht_invariants::permgroup::PermutationGroup;
use specht_invariants::secondary_engine::verify_invariance;
use specht_invariants::specht_poly::combination_polynomial;

const KLEIN: &str = "(1,2)(3,4);(1,4)(2,3)";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(std::iter::once("secondaries").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn klein_multiplicity_map() {
    let v = run_json(&["--degree", "4", "--generators", KLEIN, "--command", "multiplicities", "--format", "json"]);
    let map: Vec<(String, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["partition"].to_string(), e["multiplicity"].as_u64().unwrap()))
        .collect();
    let expected = [("[4]", 1), ("[3,1]", 0), ("[2,2]", 2), ("[2,1,1]", 0), ("[1,1,1,1]", 1)];
    assert_eq!(map, expected.map(|(p, m)| (p.to_string(), m)));
    let (_, text, _) = run(&["--degree", "4", "--generators", KLEIN, "--command", "multiplicities"]);
    assert_eq!(text, "{[1, 1, 1, 1]: 1, [2, 1, 1]: 0, [2, 2]: 2, [3, 1]: 0, [4]: 1}\n");
}

#[test]
fn trivial_group_numerator() {
    let (code, out, _) = run(&["--degree", "3", "--generators", "", "--command", "numerator"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1 + 2*z + 2*z^2 + z^3\n");
    let v = run_json(&["--degree", "3", "--command", "numerator", "--format", "json"]);
    assert_eq!(v["numerator"], serde_json::json!([1, 2, 2, 1]));
    assert_eq!(v["value_at_one"], 6);
}

#[test]
fn molien_report() {
    let (code, out, _) = run(&["--degree", "4", "--generators", KLEIN, "--command", "molien", "--order", "6"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("match :  true"), "{out}");
    let v = run_json(&["--degree", "4", "--generators", KLEIN, "--command", "molien", "--format", "json"]);
    assert_eq!(v["match"], true);
    assert_eq!(v["order"], 20);
}

#[test]
fn klein_trace_lines() {
    let (code, out, _) = run(&["--degree", "4", "--generators", KLEIN]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "[4]  ambient dimension -->  1\nrank in S_n repr :  1\n\
         [2, 2]  ambient dimension -->  2\nrank in S_n repr :  2\n\
         [1, 1, 1, 1]  ambient dimension -->  1\nrank in S_n repr :  1\n\
         total :  6\nn! / |G| :  6\n"
    );
    let (_, listed, _) = run(&["--degree", "4", "--generators", KLEIN, "--list", "--expand"]);
    assert!(listed.starts_with(&out));
    assert_eq!(listed.lines().filter(|l| l.starts_with("  = ")).count(), 6);
}

fn tableau(v: &Value) -> StandardTableau {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn json_invariants_round_trip() {
    let v = run_json(&["--degree", "4", "--generators", "(1,2,3,4)", "--format", "json", "--verify"]);
    for key in ["degree", "generators", "group_order", "total_expected", "per_lambda", "invariants"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["total_expected"], 6);
    assert!(v["per_lambda"][0].get("elapsed_ms").is_none());
    let group = PermutationGroup::parse(4, "(1,2,3,4)").unwrap();
    let invariants = v["invariants"].as_array().unwrap();
    assert_eq!(invariants.len(), 6);
    for inv in invariants {
        let s = tableau(&inv["S"]);
        let combination: Vec<(StandardTableau, Rational)> = inv["combination"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (tableau(&c["T"]), c["coeff"].as_str().unwrap().parse().unwrap()))
            .collect();
        let p = combination_polynomial(&s, &combination).unwrap();
        assert!(verify_invariance(&p, &group));
        assert_eq!(p.total_degree(), Some(inv["degree"].as_u64().unwrap() as u32));
        assert_eq!(inv["expanded"], serde_json::to_value(&p).unwrap());
    }
    let report =
        run_json(&["--degree", "4", "--generators", "(1,2,3,4)", "--format", "json", "--report-only", "--timings"]);
    assert!(report.get("invariants").is_none());
    assert!(report["per_lambda"][0].get("elapsed_ms").is_some());
}

#[test]
fn output_is_independent_of_workers() {
    let base = ["--degree", "5", "--generators", "(1,2,3,4,5)", "--format", "json", "--expand"];
    let one = run(&[&base[..], &["--workers", "1"]].concat());
    let four = run(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one.0, EXIT_OK);
    assert_eq!(one.1, four.1);
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = run(&["--generators", "(1,2)"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("--degree"));
    assert_eq!(run(&["--degree", "3", "--generators", "(1,2"]).0, EXIT_INPUT);
    assert_eq!(run(&["--degree", "3", "--generators", "(1,4)"]).0, EXIT_INPUT);
    assert_eq!(run(&["--degree", "3", "--bogus"]).0, EXIT_INPUT);
    assert_eq!(run(&["--degree", "9", "--command", "specht-table"]).0, EXIT_INPUT);
}

#[test]
fn failed_verification_exits_1_with_report() {
    let (code, out, _) = run(&["--degree", "4", "--generators", "(1,2,3,4)", "--strategy", "seminormal-direct"]);
    assert_eq!(code, EXIT_CONSISTENCY);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "verification");
    assert!(v["error"]["generator"].is_string());
}

#[test]
fn character_table_uses_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let (code, out, _) = run(&["--degree", "3", "--command", "chartable", "--cache-dir", path]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "classes :  [3]  [2, 1]  [1, 1, 1]\n[3] :  1 1 1\n[2, 1] :  -1 0 2\n[1, 1, 1] :  1 -1 1\n");
    assert!(dir.path().join("chartable-3.txt").exists());
    let (_, again, _) = run(&["--degree", "3", "--command", "chartable", "--cache-dir", path]);
    assert_eq!(out, again);
}

#[test]
fn specht_table_n3() {
    let (code, out, _) = run(&["--degree", "3", "--command", "specht-table"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 6);
    assert!(out.contains("S = [[1, 2], [3]]  T = [[1, 2], [3]] :  2*x3 - 2*x1"), "{out}");
    let v = run_json(&["--degree", "3", "--command", "specht-table", "--format", "json"]);
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn benchmark_group_flags() {
    let v = run_json(&["--parity-doubled", "5", "--command", "multiplicities", "--format", "json"]);
    assert_eq!(v["degree"], 10);
    assert_eq!(v["group_order"], 120);
    let v = run_json(&["--edge-group", "4", "--command", "numerator", "--format", "json"]);
    assert_eq!(v["degree"], 6);
    assert_eq!(v["value_at_one"], 30);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_secondaries");
    let help = Process::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    let missing = Process::new(bin).args(["--command", "numerator"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--degree"));
    let ok = Process::new(bin).args(["--degree", "3", "--command", "numerator"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "1 + 2*z + 2*z^2 + z^3\n");
}
