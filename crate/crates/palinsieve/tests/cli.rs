//! End-to-end checks of the command-line binary: output shapes, frozen
//! field names, exit codes, and thread-count independence.

use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_palinsieve"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn enumerate_lists_decimal_palindromes_one_per_line() {
    let (code, stdout, _) = run(&["enumerate", "--base", "10", "--max", "100"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 18);
    assert_eq!(lines[0], "1");
    assert_eq!(lines[17], "99");
}

#[test]
fn enumerate_json_reports_count_and_values() {
    let (code, stdout, _) = run(&[
        "enumerate", "--base", "10", "--max", "100", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["count"], 18);
    assert_eq!(v["filter"], "all");
    assert_eq!(v["values"].as_array().unwrap().len(), 18);
    assert_eq!(v["modulus"], Value::Null);
}

#[test]
fn enumerate_modulo_histogram_in_both_text_forms() {
    let (code, plain, _) = run(&["enumerate", "--base", "10", "--max", "1000", "--mod", "7"]);
    assert_eq!(code, 0);
    assert_eq!(plain.lines().count(), 7);
    let (code, csv, _) = run(&[
        "enumerate", "--base", "10", "--max", "1000", "--mod", "7", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next().unwrap(), "class,count");
    assert_eq!(csv.lines().count(), 8);
    assert_eq!(csv.lines().skip(1).collect::<Vec<_>>(), plain.lines().collect::<Vec<_>>());
    let total: u64 = plain
        .lines()
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 108);
}

#[test]
fn expsum_requires_exactly_one_mode() {
    let (code, _, stderr) = run(&["expsum", "--base", "3", "--num", "1", "--den", "7"]);
    assert_eq!(code, 2, "missing mode should be a usage error: {stderr}");
    let (code, _, _) = run(&[
        "expsum", "--base", "3", "--num", "1", "--den", "7", "--max", "100", "--prod", "3",
    ]);
    assert_eq!(code, 2);
    let (code, stdout, _) = run(&[
        "expsum", "--base", "3", "--num", "1", "--den", "7", "--max", "10000",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let norm = (v["re"].as_f64().unwrap().powi(2) + v["im"].as_f64().unwrap().powi(2)).sqrt();
    assert!(norm <= v["bound"].as_f64().unwrap());
}

#[test]
fn moments_json_has_the_frozen_fields() {
    let (code, stdout, _) = run(&["moments", "--base", "2", "--N", "3", "--K", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["moment"], "36");
    assert_eq!(v["bound_base"], 256.0);
    assert!(v["rho"].is_f64());
    assert_eq!(v["farey_sum"], Value::Null);
    let (code, stdout, _) = run(&[
        "moments", "--base", "2", "--N", "3", "--K", "2", "--farey", "8",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["farey_sum"].as_f64().unwrap() > 0.0);
}

#[test]
fn lemma_reports_are_identical_across_thread_counts() {
    let (code1, one, _) = run(&["lemmas", "--seed", "7", "--instances", "5", "--threads", "1"]);
    let (code2, two, _) = run(&["lemmas", "--seed", "7", "--instances", "5", "--threads", "2"]);
    assert_eq!(code1, 0);
    assert_eq!(code2, 0);
    assert_eq!(one, two, "reports must not depend on the thread count");
    assert_eq!(one.lines().count(), 50);
    for line in one.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["passed"].as_bool().unwrap() || v["threshold"].is_f64());
        assert_eq!(v["digest"].as_str().unwrap().len(), 16);
    }
    let (_, other_seed, _) = run(&["lemmas", "--seed", "8", "--instances", "5"]);
    assert_ne!(one, other_seed, "the seed must matter");
}

#[test]
fn sieve_report_and_csv_rows() {
    let (code, stdout, _) = run(&["sieve", "--base", "10", "--max", "100000"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["total_pal"], 1098);
    assert!(v["qualifying"].as_u64().unwrap() > 0);
    assert_eq!(v["remainder_sum"], Value::Null);
    assert_eq!(v["mertens_k"], Value::Null);
    let (code, stdout, _) = run(&["sieve", "--base", "10", "--max", "100000", "--hypothesis"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["remainder_sum"].is_f64());
    assert!(v["mertens_k"].is_f64());
    let (code, csv, _) = run(&["sieve", "--base", "10", "--max", "1000", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next().unwrap(), "n,omega,pminus,qualifies");
    assert_eq!(csv.lines().count(), 109);
    assert!(csv.lines().nth(1).unwrap().starts_with("1,0,0,"));
}

#[test]
fn equidist_tables_and_sweeps() {
    let (code, csv, _) = run(&["equidist", "--base", "2", "--max", "65536", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next().unwrap(), "q,err");
    let (code, csv, _) = run(&[
        "equidist", "--base", "2", "--sweep", "8192,16384,32768,65536", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next().unwrap(), "x,stars,aggregate");
    assert_eq!(csv.lines().count(), 5);
    let (code, stdout, _) = run(&[
        "equidist", "--base", "2", "--sweep", "8192,16384,32768,65536",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["sigma_hat"].is_f64());
    assert_eq!(v["x"], Value::Null);
    assert_eq!(v["sweep"].as_array().unwrap().len(), 4);
}

#[test]
fn sweep_reports_rows_and_fit() {
    let (code, stdout, _) = run(&["sweep", "--base", "2", "--min-exp", "7", "--max-exp", "16"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
    assert!(v["sigma_hat"].is_f64());
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let (code, _, stderr) = run(&["enumerate", "--base", "1", "--max", "10"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error"));
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _, stderr) = run(&["moments", "--base", "2", "--N", "2", "--K", "2", "--format", "plain"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("plain"));
}

#[test]
fn out_flag_writes_the_same_bytes_to_a_file() {
    let path = std::env::temp_dir().join("palinsieve_cli_test_out.json");
    let _ = std::fs::remove_file(&path);
    let (code, stdout, _) = run(&["moments", "--base", "2", "--N", "2", "--K", "2"]);
    assert_eq!(code, 0);
    let (code, empty, _) = run(&[
        "moments", "--base", "2", "--N", "2", "--K", "2", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(empty.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn help_names_the_quantities_not_the_internals() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["enumerate", "expsum", "moments", "equidist", "sieve", "lemmas", "sweep"] {
        assert!(stdout.contains(sub), "--help is missing {sub}");
    }
    let (code, stdout, _) = run(&["sieve", "--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("prime factors"));
}
