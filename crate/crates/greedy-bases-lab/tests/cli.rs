//! End-to-end tests of the command-line surface: output, exit codes and
//! determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greedy-bases-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a table: everything after the version and header lines.
fn rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# greedy-bases-lab v1"));
    let body: String = lines.collect::<Vec<_>>().join("\n");
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["parameter", "norm", "n", "m", "value", "kind", "witness"]
    );
    reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

fn eval_value(norm: &str, vector: &str) -> f64 {
    let o = run(&["eval", "--norm", norm, "--vector", vector]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().next().unwrap().parse().unwrap()
}

#[test]
fn eval_examples() {
    let o = run(&["eval", "--norm", "summing", "--n", "evens", "--vector", "n1:1,n2:-1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("1"));
    assert!(text.contains("witness:"));
    assert_eq!(eval_value("l1l2", "1:1,2:1,4:1"), 2.41421356237);
    assert_eq!(eval_value("split", "n1:1"), 1.0);
    let json = run(&["eval", "--norm", "l1", "--vector", "1:-2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["value"], 2.0);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["eval", "--norm", "nope", "--vector", "1:1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--norm", "l1", "--vector", "1:x"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--param", "sc", "--norm", "split", "--m", "3..1"]).status.code(), Some(2));
    let infeasible = run(&["table", "--param", "conservative", "--norm", "l1", "--window", "60", "--cap", "8"]);
    assert_eq!(infeasible.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&infeasible.stderr).contains("limit"));
    let threads = Command::new(env!("CARGO_BIN_EXE_greedy-bases-lab"))
        .args(["list"])
        .env("GBL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn sc_table_for_split_norm() {
    let o = run(&["table", "--param", "sc", "--norm", "split", "--m", "1..4"]);
    assert!(o.status.success());
    let got: Vec<(String, String)> = rows(&o).into_iter().map(|r| (r[3].clone(), r[4].clone())).collect();
    let want = [("1", "1"), ("2", "1"), ("3", "2"), ("4", "2")].map(|(a, b)| (a.to_string(), b.to_string()));
    assert_eq!(got, want);
}

#[test]
fn omega_table_is_deterministic_and_witnesses_reevaluate() {
    let args = ["table", "--param", "omega", "--norm", "summing", "--m", "1..3"];
    let first = run(&args);
    let single = Command::new(env!("CARGO_BIN_EXE_greedy-bases-lab"))
        .args(args)
        .env("GBL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.stdout, run(&args).stdout);
    assert_eq!(first.stdout, single.stdout);
    let table = rows(&first);
    let values: Vec<&str> = table.iter().map(|r| r[4].as_str()).collect();
    assert_eq!(values, ["5", "9", "13"]);
    for row in &table {
        let digest = &row[6];
        let (num, den) = digest.strip_prefix("num=").unwrap().split_once(";den=").unwrap();
        let ratio = eval_value("summing", num) / eval_value("summing", den);
        let value: f64 = row[4].parse().unwrap();
        assert!((ratio - value).abs() <= 1e-9 * value, "{digest}");
    }
}

#[test]
fn conservative_row_for_l1l2() {
    let o = run(&["table", "--param", "conservative", "--norm", "l1l2", "--window", "20"]);
    let table = rows(&o);
    assert_eq!(table.len(), 1);
    assert_eq!(table[0][4], "1");
    assert_eq!(table[0][5], "exact_enumeration");
}

#[test]
fn check_exit_codes() {
    let fail = run(&["check", "--norm", "family_two_block", "--variant", "pslc", "--random", "20"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).starts_with("FAIL pslc"));
    let pass = run(&["check", "--norm", "l1l2", "--variant", "pslc", "--random", "20"]);
    assert_eq!(pass.status.code(), Some(0));
}

#[test]
fn oracle_suite_passes() {
    let o = run(&["verify", "--suite", "oracles"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.ends_with("checks passed")));
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
}
