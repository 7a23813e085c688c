use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indexcode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(sub: &str, name: &str, extra: &[&str]) -> Output {
    let path = problem(name);
    let mut args = vec![sub, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn analyze_reports_method_and_length() {
    let v = json(&run_on("analyze", "ex5", &["--format", "json"]));
    assert_eq!(v["c_opt"], 7);
    assert_eq!(v["mu"], 1);
    assert_eq!(v["method"], "cycle");

    let v = json(&run_on("analyze", "ex4", &["--format", "json"]));
    assert_eq!((v["c_opt"].as_u64(), v["mu"].as_u64()), (Some(3), Some(2)));
    assert_eq!(v["method"], "minrank");

    let v = json(&run_on("analyze", "ex8", &["--format", "json"]));
    assert_eq!(v["c_opt"], 10);
    assert_eq!(v["method"], "staged-reduction");
}

#[test]
fn analyze_table_output() {
    let out = run_on("analyze", "ex7", &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("c_opt      8"));
    assert!(text.contains("stage 1"));
}

#[test]
fn enumerate_lists_every_code() {
    let out = run_on("enumerate", "ex3", &["--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 28);
    assert!(text.starts_with("id,code\n"));

    let v = json(&run_on("enumerate", "ex1", &["--format", "json"]));
    assert_eq!(v["total"], "3");
    assert_eq!(v["codes"].as_array().unwrap().len(), 3);
}

#[test]
fn enumerate_over_cap_prints_census_and_exits_three() {
    let out = run_on("enumerate", "ex4", &["--cap-codes", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stdout).unwrap().contains("codes 56"));
}

#[test]
fn minmax_finds_two() {
    let v = json(&run_on("minmax", "ex4", &["--format", "json"]));
    assert_eq!(v["t_minmax"], 2);
    assert_eq!(v["per_code"].as_array().unwrap().len(), 56);
    assert!(!v["winners"].as_array().unwrap().is_empty());

    let v = json(&run_on("minmax", "ex4", &["--format", "json", "--first"]));
    assert_eq!(v["winners"].as_array().unwrap().len(), 1);
}

#[test]
fn oracle_exit_codes() {
    let out = run_on("oracle", "ex1", &["--c", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("no_solution"));

    let v = json(&run_on("oracle", "ex2", &["--c", "3", "--format", "json"]));
    assert_eq!(v["verdict"]["verdict"], "not_optimal");
    assert_eq!(v["verdict"]["lambda"], 1);

    let out = run_on("oracle", "ex2", &["--c", "3", "--cap-sprime", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_input_exits_two() {
    let path = std::env::temp_dir().join(format!("indexcode-bad-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"messages": 2, "receivers": [{"wants": [1], "knows": [1]}]}"#).unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error"));

    let out = run(&["analyze", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_on("ber", "ex1", &["--code", "x1+x2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three() {
    let out = run_on("analyze", "ex4", &["--cap-fitting", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn repeated_runs_are_identical() {
    let a = run_on("enumerate", "ex4", &["--format", "json"]);
    let b = run_on("enumerate", "ex4", &["--format", "json"]);
    assert_eq!(a.stdout, b.stdout);

    let args = ["--format", "csv", "--trials", "2000", "--snr", "0:10:5", "--seed", "9"];
    let a = run_on("ber", "ex1", &args);
    let b = run_on("ber", "ex1", &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("code,snr_db,receiver,ber,ci_halfwidth\n"));
    // three codes, three points, three receivers plus the worst case
    assert_eq!(text.lines().count(), 1 + 3 * 3 * 4);
}

#[test]
fn ber_with_explicit_codes_writes_files() {
    let dir = std::env::temp_dir();
    let csv = dir.join(format!("indexcode-ber-{}.csv", std::process::id()));
    let gp = dir.join(format!("indexcode-ber-{}.gp", std::process::id()));
    let out = run_on(
        "ber",
        "ex4",
        &[
            "--code", "x3+x2, x2+x1, x4",
            "--code", "x3+x2, x2+x1, x1+x4+x3",
            "--trials", "5000",
            "--snr", "0,20",
            "--csv-out", csv.to_str().unwrap(),
            "--plot-script", gp.to_str().unwrap(),
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ranking"));
    assert!(std::fs::read_to_string(&csv).unwrap().lines().count() > 1);
    assert!(std::fs::read_to_string(&gp).unwrap().contains(csv.to_str().unwrap()));
    std::fs::remove_file(csv).ok();
    std::fs::remove_file(gp).ok();
}

#[test]
fn bad_channel_is_rejected() {
    let out = run_on("ber", "ex1", &["--channel", "fixed:0.7", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_on("ber", "ex1", &["--channel", "awgn"]);
    assert_eq!(out.status.code(), Some(2));
}
