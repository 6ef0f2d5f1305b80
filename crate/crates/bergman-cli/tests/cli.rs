//! End-to-end tests against the compiled binary: output contracts and exit
//! codes (0 ok, 1 verification failure, 2 domain/usage, 3 convergence).

use std::process::{Command, Output};

fn bergman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn kernel_hardy_geometric_value() {
    let out = bergman(&[
        "kernel", "--family", "hardy", "--m", "0", "--p", "1", "--xi", "0.5", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = rows[0]["value"][0].as_f64().unwrap();
    assert!((value - 4.0).abs() < 1e-12, "got {value}");
}

#[test]
fn kernel_bergman_flat_with_series_check() {
    let out = bergman(&[
        "kernel",
        "--family",
        "bergman",
        "--alpha",
        "0",
        "--beta0",
        "0",
        "--p",
        "0",
        "--m",
        "0",
        "--R",
        "1",
        "--xi",
        "0.5",
        "--series-truncation",
        "600",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((rows[0]["value"][0].as_f64().unwrap() - 4.0).abs() < 1e-10);
    assert!(rows[0]["abs_diff"].as_f64().unwrap() < 1e-10);
}

#[test]
fn kernel_outside_domain_exits_2() {
    let out = bergman(&[
        "kernel", "--family", "bergman", "--xi", "1.5", "--R", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_missing_flags_exits_2() {
    let out = bergman(&["kernel", "--family", "bergman"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_convergence_failure_exits_3() {
    // inside the domain guard but too close to the boundary for the term
    // budget of the hypergeometric series
    let out = bergman(&[
        "kernel", "--family", "bergman", "--xi", "0.998", "--R", "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn kernel_json_uses_17_significant_digits() {
    let out = bergman(&[
        "kernel", "--family", "hardy", "--p", "1", "--xi", "0.5", "--format", "json",
    ]);
    let text = stdout(&out);
    assert!(
        text.contains("5.0000000000000000e-1"),
        "expected 17-digit floats, got {text}"
    );
}

#[test]
fn transform_involution_twice_restores_coefficients() {
    let first = bergman(&[
        "transform", "--family", "disk", "--kind", "involution", "--p", "1", "--q", "1",
        "--alpha", "0.7", "--beta0", "-0.3", "--coeffs", "[[1,0],[2,0],[3,0],[4,0]]",
        "--format", "json",
    ]);
    assert!(first.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    let intermediate = serde_json::to_string(&v["coefficients"]).unwrap();
    let second = bergman(&[
        "transform", "--family", "disk", "--kind", "involution", "--p", "1", "--q", "1",
        "--alpha", "0.7", "--beta0", "-0.3", "--coeffs", &intermediate, "--format", "json",
    ]);
    assert!(second.status.success());
    let w: serde_json::Value = serde_json::from_str(&stdout(&second)).unwrap();
    let back = w["coefficients"].as_array().unwrap();
    let expected = [1.0, 2.0, 3.0, 4.0];
    for (pair, want) in back.iter().zip(expected) {
        assert_eq!(pair[0].as_f64().unwrap(), want);
        assert_eq!(pair[1].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn transform_identity_case_keeps_coefficients() {
    let out = bergman(&[
        "transform", "--family", "disk", "--kind", "full", "--p", "1", "--q", "1",
        "--alpha", "0.5", "--beta0", "-0.25", "--coeffs", "[[1,0]]", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["coefficients"][0][0].as_f64().unwrap(), 1.0);
}

#[test]
fn transform_parity_mismatch_exits_2() {
    let out = bergman(&[
        "transform", "--family", "disk", "--kind", "even-odd", "--p", "0", "--q", "0",
        "--alpha", "0.5", "--coeffs", "[[1,0]]", "--parity", "odd",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_malformed_json_exits_2() {
    let out = bergman(&[
        "transform", "--family", "disk", "--kind", "full", "--p", "0", "--q", "0",
        "--alpha", "0.5", "--coeffs", "this is not json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_quadrature_point_agrees() {
    let out = bergman(&[
        "transform", "--family", "disk", "--kind", "full", "--p", "1", "--q", "2",
        "--alpha", "0.5", "--beta0", "-0.25", "--coeffs", "[[1,0],[0,1]]",
        "--point", "0.4", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["points"][0]["abs_diff"].as_f64().unwrap() < 1e-7);
}

#[test]
fn verify_passes_and_is_byte_deterministic() {
    let a = bergman(&["verify", "--seed", "7", "--format", "json"]);
    assert!(a.status.success(), "verify failed: {}", stdout(&a));
    let b = bergman(&["verify", "--seed", "7", "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b), "reports differ between runs");
    let reports: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let arr = reports.as_array().unwrap();
    assert!(arr.len() >= 40);
    assert!(arr.iter().all(|r| r["passed"].as_bool().unwrap()));
}

#[test]
fn verify_with_zero_tolerance_exits_1() {
    let out = bergman(&["verify", "--tolerance-scale", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn limit_scans_pass() {
    let hardy = bergman(&["limit", "--kind", "hardy", "--xi", "0.5", "--p", "1"]);
    assert!(hardy.status.success());
    let bargmann = bergman(&[
        "limit", "--kind", "bargmann", "--xi", "0.5", "--theta", "1",
        "--sequence", "5,10,20,40,100",
    ]);
    assert!(bargmann.status.success());
}

#[test]
fn norm_with_quadrature_oracle() {
    let out = bergman(&[
        "norm", "--family", "bergman", "--alpha", "0", "--beta0", "0", "--p", "0", "--m", "0",
        "--coeffs", r#"{"min_index":0,"coefficients":[[1,0],[1,0]]}"#, "--quadrature",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let norm = v["norm"].as_f64().unwrap();
    assert!((norm - 1.5f64.sqrt()).abs() < 1e-12);
    assert!(v["abs_diff"].as_f64().unwrap() < 1e-10);
}
