use std::process::Command;

fn hvlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hvlab")).args(args).env_remove("HVLAB_THREADS").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn norm_of_monomial_prints_one() {
    let (code, out, _) = hvlab(&["norm", "--space", "H2", "--f", r#"{"kind":"monomial","n":5}"#]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1.0");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hvlab(&["frobnicate"]).0, 2);
    assert_eq!(hvlab(&["norm", "--space", "nowhere", "--f", "neg_log"]).0, 2);
    assert_eq!(hvlab(&["norm", "--space", "H2", "--f", "{not json"]).0, 2);
    assert_eq!(hvlab(&["experiment", "no-such-thing"]).0, 2);
    assert_eq!(hvlab(&["--tol", "2", "realize", "--f", "neg_log"]).0, 2);
}

#[test]
fn safe_radius_shortfall_exits_three() {
    let (code, _, err) = hvlab(&["norm", "--space", "H2", "--f", r#"{"kind":"binomial_power","alpha":-0.25}"#, "--min-safe-radius", "0.9999999"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn failed_expectation_exits_one() {
    // the containment check needs f in H^2; (1-z)^{-1/2} is not
    let (code, _, err) = hvlab(&["experiment", "witness-containment", "--f", r#"{"kind":"binomial_power","alpha":-0.5}"#]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("FAIL"));
}

#[test]
fn monomial_decay_writes_csv_with_closed_form() {
    let dir = std::env::temp_dir().join(format!("hvlab-cli-decay-{}", std::process::id()));
    let (code, _, err) = hvlab(&["run", "monomial-decay", "--g", "neg_log", "--p", "2", "--n", "16..1024", "--out", dir.to_str().unwrap(), "--svg"]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(dir.join("decay.csv")).unwrap();
    assert!(csv.starts_with("n,norm,closed_form,rel_err"));
    assert_eq!(csv.lines().count(), 1 + 7);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(dir.join("decay.svg").exists());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn apply_op_matches_closed_form() {
    // T_z(1) = z
    let (code, out, _) = hvlab(&["--order", "4", "apply-op", "--op", "Tg", "--g", r#"{"kind":"monomial","n":1}"#, "--f", r#"{"kind":"polynomial","coeffs":[1]}"#]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,re,im");
    assert!(lines[2].starts_with("1,1.0000000000000000e0,"));
    let (code, out, _) = hvlab(&["--order", "3", "apply-op", "--op", "cesaro", "--f", r#"{"kind":"polynomial","coeffs":[1,1]}"#, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["coefficients"][1][0].as_f64(), Some(1.0));
    assert_eq!(v["result"]["coefficients"][3][0].as_f64(), Some(0.5));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = std::env::temp_dir().join(format!("hvlab-cli-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"version": 1, "order": 8}"#).unwrap();
    let (code, out, _) = hvlab(&["--config", cfg.to_str().unwrap(), "realize", "--f", "neg_log"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 9);
    let (code, out, _) = hvlab(&["--config", cfg.to_str().unwrap(), "--order", "3", "realize", "--f", "neg_log"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 4);
    std::fs::write(&cfg, r#"{"version": 9}"#).unwrap();
    assert_eq!(hvlab(&["--config", cfg.to_str().unwrap(), "realize", "--f", "neg_log"]).0, 2);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_hvlab")).args(["suite"]).env("HVLAB_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
