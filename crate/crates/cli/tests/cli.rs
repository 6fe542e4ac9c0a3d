//! End-to-end tests of the `bellman` binary: exit-code contract, output
//! formats, determinism, and the config-file merge.

#![allow(clippy::excessive_precision)] // frozen oracle literals

use std::path::PathBuf;
use std::process::{Command, Output};

fn bellman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn field(text: &str, key: &str) -> f64 {
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(&format!("{key} = ")) {
            return rest.trim().parse().unwrap_or(f64::NAN);
        }
    }
    panic!("missing field {key} in:\n{text}");
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("bellman-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn eval_matches_reference_point() {
    let out = bellman(&["eval", "--p", "2", "--q", "1.5", "--s1", "0.5", "--s2", "0.9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!((field(&text, "t") - 1.703_889_196_747_705_8).abs() < 1e-9);
    assert!(text.contains("case = A"));
    assert!(text.contains("pred_sign = -"));
}

#[test]
fn eval_at_critical_point_reaches_omega() {
    // s2'(0.75) for (2, 1.5); t there equals omega_p(0.75) = 1.5
    let out = bellman(&[
        "eval", "--p", "2", "--q", "1.5", "--s1", "0.75", "--s2", "0.9185586535436918",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!((field(&text, "t") - 1.5).abs() < 1e-9, "{text}");
}

#[test]
fn eval_rejects_s2_one_with_exit_2() {
    let out = bellman(&["eval", "--p", "2", "--q", "1.5", "--s1", "0.5", "--s2", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("s2 < 1"));
}

#[test]
fn eval_missing_flag_is_usage_error() {
    let out = bellman(&["eval", "--p", "2", "--q", "1.5", "--s1", "0.5"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = bellman(&["eval", "--nope", "1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn scan_small_grid_is_usage_error() {
    let out = bellman(&["scan", "--p", "2", "--q", "1.5", "--s1", "0.75", "--n", "2"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn scan_reports_peak_in_summary() {
    let out = bellman(&["scan", "--p", "2", "--q", "1.5", "--s1", "0.75", "--n", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let summary = text
        .lines()
        .find(|l| l.starts_with("# s2_critical="))
        .expect("summary line");
    assert!(summary.contains("violations=0"), "{summary}");
    let peak_t: f64 = summary
        .split("peak_t=")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((peak_t - 1.5).abs() < 1e-6);
}

#[test]
fn scan_json_and_csv_carry_identical_numbers() {
    let json_out = bellman(&[
        "scan", "--p", "2", "--q", "1.5", "--s1", "0.5", "--n", "32", "--format", "json",
    ]);
    let csv_out = bellman(&[
        "scan", "--p", "2", "--q", "1.5", "--s1", "0.5", "--n", "32", "--format", "csv",
    ]);
    assert_eq!(json_out.status.code(), Some(0));
    assert_eq!(csv_out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&json_out)).unwrap();
    let rows = parsed["rows"].as_array().unwrap();
    let csv_text = stdout_of(&csv_out);
    let csv_rows: Vec<&str> = csv_text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(rows.len(), csv_rows.len());
    for (jrow, crow) in rows.iter().zip(&csv_rows) {
        let cells: Vec<&str> = crow.split(',').collect();
        assert_eq!(jrow["s2"].as_str().unwrap(), cells[0]);
        assert_eq!(jrow["t"].as_str().unwrap(), cells[1]);
        assert_eq!(jrow["fd_value"].as_str().unwrap(), cells[9]);
    }
}

#[test]
fn scan_json_is_byte_deterministic() {
    let a = bellman(&[
        "scan", "--p", "3", "--q", "2", "--s1", "0.35", "--n", "32", "--format", "json",
    ]);
    let b = bellman(&[
        "scan", "--p", "3", "--q", "2", "--s1", "0.35", "--n", "32", "--format", "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_all_passes() {
    let out = bellman(&["verify", "--n", "40"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.lines().filter(|l| l.starts_with("suite ")).count() == 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_runs_single_suite() {
    let out = bellman(&["verify", "--suite", "a-monotone", "--n", "60"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("suite ")).count(), 1);
    assert!(text.contains("a-monotone"));
}

#[test]
fn verify_with_corrupted_tolerance_fails() {
    let out = bellman(&["verify", "--suite", "roundtrip", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("FAIL"));
    assert!(text.contains("worst offender"));
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let out = bellman(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn hardy_runs_and_writes_records() {
    let path = tmp_path("hardy.csv");
    let out = bellman(&[
        "hardy",
        "--trials",
        "40",
        "--seed",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("hardy trials:"), "{text}");
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("seed,n_pieces,status,"));
    assert_eq!(csv.lines().count(), 41);
    std::fs::remove_file(&path).ok();
}

#[test]
fn hardy_json_is_deterministic_for_seed() {
    let p1 = tmp_path("hardy-a.json");
    let p2 = tmp_path("hardy-b.json");
    for p in [&p1, &p2] {
        let out = bellman(&[
            "hardy",
            "--trials",
            "25",
            "--seed",
            "9",
            "--format",
            "json",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    std::fs::remove_file(&p1).ok();
    std::fs::remove_file(&p2).ok();
}

#[test]
fn moments_maps_the_two_step_example() {
    let out = bellman(&[
        "moments", "--p", "2", "--q", "1.5", "--x", "1.5", "--y", "1.9142135623730951", "--z",
        "2.5", "--kappa", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!((field(&text, "s1") - 0.9).abs() < 1e-12);
    assert!((field(&text, "s2") - 0.959_724_318_748_356_7).abs() < 1e-12);
    assert!((field(&text, "y0") - 1.902_032_864_373_824).abs() < 1e-9);
}

#[test]
fn moments_rejects_inadmissible_triple() {
    // y sits exactly on the excluded lower boundary x^q / kappa^{q-1} = 1
    let out = bellman(&[
        "moments", "--p", "2", "--q", "1.5", "--x", "1", "--y", "1", "--z", "1.3", "--kappa", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("x^q / kappa^(q-1) < y"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let path = tmp_path("eval.cfg");
    std::fs::write(
        &path,
        "# reference point\np = 2.0\nq = 1.5\ns1 = 0.5\ns2 = 0.95\n",
    )
    .unwrap();
    // config alone
    let out = bellman(&["eval", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let t_cfg = field(&stdout_of(&out), "t");
    // flag overrides the config's s2
    let out = bellman(&["eval", "--config", path.to_str().unwrap(), "--s2", "0.9"]);
    assert_eq!(out.status.code(), Some(0));
    let t_flag = field(&stdout_of(&out), "t");
    assert!((t_flag - 1.703_889_196_747_705_8).abs() < 1e-9);
    assert!((t_cfg - t_flag).abs() > 1e-6, "override had no effect");
    std::fs::remove_file(&path).ok();
}

#[test]
fn config_file_rejects_unknown_keys() {
    let path = tmp_path("bad.cfg");
    std::fs::write(&path, "p = 2.0\nbogus = 1\n").unwrap();
    let out = bellman(&["eval", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    std::fs::remove_file(&path).ok();
}
