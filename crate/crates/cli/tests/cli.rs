//! End-to-end runs of the `pearcey` binary.

use serde_json::Value;
use std::process::{Command, Output};

fn pearcey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pearcey")).args(args).env("PEARCEY_THREADS", "2").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Header and data rows of a CSV report, skipping the `#` block.
fn csv_table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().expect("header").split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn det_vanishes_without_thinning() {
    let o = pearcey(&["det", "--gamma", "0", "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_table(&stdout(&o));
    let col = header.iter().position(|h| h == "F").unwrap();
    assert_eq!(rows[0][col].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn csv_has_metadata_block_and_seventeen_digits() {
    let o = pearcey(&["det", "--gamma", "0.5", "--s", "2", "--quad-order", "48"]);
    let text = stdout(&o);
    assert!(text.starts_with("# pearcey-cli "));
    assert!(text.contains("# config: "));
    assert!(text.contains("# tolerances: "));
    let (header, rows) = csv_table(&text);
    let f = &rows[0][header.iter().position(|h| h == "F").unwrap()];
    let mantissa = f.trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{f}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pearcey(&["det", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(pearcey(&["det", "--gamma", "1.5", "--s", "1"]).status.code(), Some(2));
    assert_eq!(pearcey(&["det", "--s", "-1"]).status.code(), Some(2));
    assert_eq!(pearcey(&["scan", "--s-min", "5", "--s-max", "4", "--s-steps", "3"]).status.code(), Some(2));
    assert_eq!(pearcey(&["chf-verify", "--beta-im", "0.9"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_pearcey")).args(["det", "--s", "1"]).env("PEARCEY_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn scan_reports_asymptotics_and_shrinking_error() {
    let o = pearcey(&["scan", "--gamma", "0.5", "--rho", "0", "--s-min", "4", "--s-max", "10", "--s-steps", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_table(&stdout(&o));
    for c in ["s", "F_num", "F_asy", "err"] {
        assert!(header.iter().any(|h| h == c), "missing column {c}");
    }
    assert_eq!(rows.len(), 4);
    let err = header.iter().position(|h| h == "err").unwrap();
    let first: f64 = rows[0][err].parse().unwrap();
    let last: f64 = rows[3][err].parse().unwrap();
    assert!(last < first, "{first} -> {last}");
    assert!(last < 5e-3);
}

#[test]
fn scan_at_full_thinning_fits_a_constant() {
    let o = pearcey(&["scan", "--gamma", "1", "--s-min", "2", "--s-max", "4", "--s-steps", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["diagnostics"]["fitted_constant"]["c"].is_number());
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
}

#[test]
fn json_output_has_config_results_diagnostics() {
    let o = pearcey(&["kernel", "--rho", "1", "--s-min", "-1", "--s-max", "1", "--s-steps", "3", "--oracle", "all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["config", "diagnostics", "results"]);
    assert!(v["diagnostics"]["max_pairwise_diff"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["config"]["oracle"], "all");
}

#[test]
fn chf_verify_reports_small_jump_residuals() {
    let o = pearcey(&["chf-verify", "--beta-im", "0.11", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["diagnostics"]["max_ray_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["results"].as_array().unwrap().len(), 24);
}

#[test]
fn chf_verify_at_zero_beta_skips_the_expansion() {
    let o = pearcey(&["chf-verify", "--beta-im", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["diagnostics"]["expansion"].is_null());
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["moments", "--s-min", "2", "--s-max", "6", "--s-steps", "3", "--nu", "0.1", "--quad-order", "60"];
    let a = pearcey(&args);
    let b = pearcey(&args);
    let c = Command::new(env!("CARGO_BIN_EXE_pearcey")).args(args).env("PEARCEY_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("pearcey-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("clt.csv");
    let o = pearcey(&["clt", "--s-min", "4", "--s-max", "6", "--s-steps", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let (header, rows) = csv_table(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(header, ["s", "distance", "mu", "sigma2"]);
    assert_eq!(rows.len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hamiltonian_rows_satisfy_the_constraint() {
    let o = pearcey(&["hamiltonian", "--gamma", "0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["diagnostics"]["sweep"]["converged"].as_bool().unwrap());
    assert!(v["diagnostics"]["max_constraint"].as_f64().unwrap() < 1e-9);
    assert!(v["results"].as_array().unwrap().len() > 1000);
}
