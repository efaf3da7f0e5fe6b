use std::process::{Command, Output};

use serde_json::Value;

fn sumsets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsets"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn compute_reports_sizes_and_table() {
    let out = sumsets(&[
        "compute",
        "--set",
        "1,2,3,4,5",
        "--k",
        "2",
        "--format",
        "json",
        "--no-timing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v.get("wall_time_ms").is_none());
    let entry = &v["result"][0];
    assert_eq!(entry["size"], 7);
    assert_eq!(entry["sums"], serde_json::json!([3, 4, 5, 6, 7, 8, 9]));
    assert_eq!(
        entry["multiplicity"]["entries"],
        serde_json::json!([[3, 1], [4, 1], [5, 2], [6, 2], [7, 2], [8, 1], [9, 1]])
    );
}

#[test]
fn compute_csv_header() {
    let out = sumsets(&[
        "compute",
        "--gen",
        "gp:n=4,r=2,a0=1",
        "--k",
        "1..2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("set,n,k,size_k,size_k1,lhs_cross,rhs_cross,holds,hyp_theorem,hyp_question")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn verify_clean_run_exits_zero() {
    let out = sumsets(&[
        "verify",
        "--gen",
        "gp:n=6,r=3,a0=1",
        "--k",
        "1..4",
        "--format",
        "json",
        "--no-timing",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let entry = &v["result"][0];
    assert_eq!(entry["oracle_agrees"], Value::Bool(true), "{entry}");
}

#[test]
fn invalid_input_exit_code() {
    for args in [
        &["compute", "--set", "1,2,2", "--k", "1"][..],
        &["compute", "--set", "1,2,3", "--k", "5"],
        &["compute", "--set", "1,x", "--k", "1"],
        &[
            "search",
            "--exhaustive",
            "--universe",
            "4",
            "--n",
            "6",
            "--k",
            "1",
        ],
    ] {
        let out = sumsets(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn budget_exit_code() {
    let out = sumsets(&[
        "search",
        "--exhaustive",
        "--universe",
        "40",
        "--n",
        "10",
        "--k",
        "2",
        "--budget",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_is_reproducible_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let path_str = path.to_str().unwrap();
    let args = [
        "search",
        "--stochastic",
        "--n",
        "7",
        "--k",
        "2",
        "--range",
        "-30..30",
        "--budget",
        "500",
        "--seed",
        "9",
        "--format",
        "json",
        "--no-timing",
        "-o",
        path_str,
    ];
    assert_eq!(sumsets(&args).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(sumsets(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&path).unwrap());

    let report = sumsets(&[
        "report",
        "--input",
        path_str,
        "--format",
        "json",
        "--no-timing",
    ]);
    assert_eq!(
        report.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&report.stderr)
    );
}

#[test]
fn set_file_with_comments() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sets.txt");
    std::fs::write(&path, "# two sets\n1,2,4,8\n\n0, 3, 5, 9, 14  # trailing\n").unwrap();
    let out = sumsets(&[
        "compute",
        "--file",
        path.to_str().unwrap(),
        "--k",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);

    std::fs::write(&path, "0 3 5\n").unwrap();
    let out = sumsets(&["compute", "--file", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
