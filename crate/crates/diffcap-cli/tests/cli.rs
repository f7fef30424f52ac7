//! CLI behavior: exit codes, config-file handling, flagged sweep rows,
//! and output files.

#![allow(clippy::excessive_precision)] // frozen oracle values keep their printed digits

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diffcap"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_with_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["sweep"],                                      // missing range
        vec!["sweep", "5", "1"],                            // inverted range
        vec!["sweep", "0.0001", "5"],                       // below supported range
        vec!["sweep", "1", "5", "--step", "-0.1"],          // bad step
        vec!["impulse", "--t-max", "-1"],                   // negative t-max
        vec!["impulse", "--n-points", "0"],                 // empty grid
        vec!["capacity", "1", "2", "3"],                    // missing duration
        vec!["capacity", "1", "2", "3", "-1"],              // non-positive duration
        vec!["simulate", "--bits", "10a1"],                 // invalid bit character
        vec!["simulate"],                                   // neither bits nor random
        vec!["simulate", "--bits", "1", "--random", "4"],   // both sources
        vec!["timing"],                                     // missing f-tilde
        vec!["timing", "--f-tilde", "0"],                   // out of range
        vec!["nonsense"],                                   // unknown subcommand
    ];
    for args in &cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "expected exit 2 for {args:?}");
    }
}

#[test]
fn solver_failure_exits_with_3() {
    // inside the supported gate, but T01 overflows for every grid point
    let out = run(&["sweep", "0.002", "0.0028", "--step", "0.0004"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("every grid point"), "stderr: {err}");
}

#[test]
fn sweep_flags_failed_rows_and_continues() {
    // 0.002 cannot be solved, the rest of the grid can
    let csv = stdout_of(&["sweep", "0.002", "0.004", "--step", "0.001"]);
    let flagged: Vec<&str> = csv.lines().filter(|l| l.contains("f_tilde=0.002:")).collect();
    assert_eq!(flagged.len(), 1, "expected one flagged row:\n{csv}");
    let data_rows = csv.lines().skip(1).filter(|l| !l.starts_with('#')).count();
    assert_eq!(data_rows, 2);
}

#[test]
fn config_file_supplies_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# sweep configuration\nf-min=1\nf-max=3\nstep=0.5\nt00=2\nalpha-policy=paper\n",
    )
    .unwrap();

    // everything from the config file
    let from_cfg = stdout_of(&["sweep", "--config", cfg.to_str().unwrap()]);
    let from_flags = stdout_of(&["sweep", "1", "3", "--step", "0.5", "--t00", "2"]);
    assert_eq!(from_cfg, from_flags);

    // a flag beats the file
    let overridden = stdout_of(&["sweep", "--config", cfg.to_str().unwrap(), "--t00", "1"]);
    let pure = stdout_of(&["sweep", "1", "3", "--step", "0.5", "--t00", "1"]);
    assert_eq!(overridden, pure);
    assert_ne!(from_cfg, overridden);

    // malformed config is a usage error
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "f-min 1\n").unwrap();
    let out = run(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("impulse.csv");
    let streamed = stdout_of(&["impulse", "--n-points", "10"]);
    stdout_of(&["impulse", "--n-points", "10", "--output", path.to_str().unwrap()]);
    assert_eq!(streamed, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn impulse_header_names_the_peak() {
    let csv = stdout_of(&["impulse", "--dist", "2", "--diff-coeff", "1", "--n-points", "5"]);
    let mut lines = csv.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# analytic peak: t=1,"), "got: {comment}");
    assert_eq!(lines.next().unwrap(), "t,g");
    assert_eq!(lines.count(), 5);

    // single-point degenerate grid lands on t_max
    let one = stdout_of(&["impulse", "--t-max", "4", "--n-points", "1"]);
    assert!(one.lines().nth(2).unwrap().starts_with("4,"));
}

#[test]
fn simulate_markov_round_trip_summary() {
    let out = stdout_of(&["simulate", "--bits", "101", "--f-tilde", "3.9"]);
    assert!(out.contains("# mode=markov decoded=101"), "got:\n{out}");
    assert!(out.contains("# mismatches=0"));

    let out = stdout_of(&["simulate", "--bits", "1011", "--mode", "full"]);
    assert!(out.contains("# max_boundary_deviation="));

    let header = out.lines().next().unwrap();
    assert_eq!(header, "t,concentration");
}

#[test]
fn timing_row_matches_known_point() {
    let out = stdout_of(&["timing", "--f-tilde", "3.9"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "f_tilde,t01,t10,t11,alpha_used,w,capacity,capacity_per_t00"
    );
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[1] - 1.8480930958336909).abs() < 1e-9);
    assert!((row[2] - 5.2353038741438229).abs() < 1e-9);
    assert!((row[7] - 0.5001182187684001).abs() < 1e-9);
    // capacity column consistent with the root column
    assert!((row[5].log2() - row[6]).abs() < 1e-10);
}

#[test]
fn capacity_report_line() {
    let out = stdout_of(&["capacity", "1", "1", "1", "1"]);
    assert_eq!(out.trim(), "W=2 capacity=1 capacity_per_t00=1");
}

#[test]
fn missing_config_file_is_usage_error() {
    let out = run(&["sweep", "--config", Path::new("/nonexistent/x.cfg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
