use std::fs;
use std::process::{Command, Output};

use edwards_core::identities::{verify_certificate, CertJson, Certificate};
use serde_json::Value;

fn edwards(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edwards")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn certify_filter_writes_verifiable_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = edwards(&["certify", "--filter", "affine_closure", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("PASS affine_closure"), "{text}");
    assert!(text.contains("1/1 certificates verified"), "{text}");

    let raw = fs::read_to_string(dir.path().join("certificates/affine_closure.json")).unwrap();
    let json: CertJson = serde_json::from_str(&raw).unwrap();
    assert_eq!(json.schema_version, 1);
    assert_eq!(json.cofactors.len(), 3);
    let cert = Certificate::from_json(&json).unwrap();
    assert!(verify_certificate(&cert).passed);
}

#[test]
fn certify_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cache = dir.path().join("cache");
    let args = [
        "certify",
        "--filter",
        "inverse",
        "--out",
        out.to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
    ];
    let first = edwards(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(!stdout(&first).contains("(cached)"));
    let second = edwards(&args);
    assert_eq!(second.status.code(), Some(0));
    assert!(stdout(&second).contains("(cached)"), "{}", stdout(&second));
}

#[test]
fn certify_json_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = edwards(&["certify", "--filter", "tau_annihilates", "--json", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("tau_annihilates"), "{text}");
}

#[test]
fn group_check_report_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = edwards(&[
            "group-check",
            "--p",
            "13",
            "--t",
            "2",
            "--mode",
            "projective",
            "--level",
            "full",
            "--seed",
            "7",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("all checks passed"));
    }
    let ra = fs::read(a.path().join("report.json")).unwrap();
    let rb = fs::read(b.path().join("report.json")).unwrap();
    assert_eq!(ra, rb);

    let v: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["mode"], "projective");
    assert_eq!(v["passed"], true);
    assert_eq!(v["counts"]["classes"], 16);
}

#[test]
fn affine_check_json_on_stdout() {
    let o = edwards(&["group-check", "--p", "13", "--c", "1", "--d", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["counts"]["affine_points"], 8);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn square_d_is_a_usage_error_with_witness() {
    let o = edwards(&["group-check", "--p", "13", "--c", "1", "--d", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("(4, 5)"), "{err}");
}

#[test]
fn mode_and_parameter_mismatch() {
    let o = edwards(&["group-check", "--p", "13", "--c", "1", "--d", "2", "--mode", "projective"]);
    assert_eq!(o.status.code(), Some(2));
    let o = edwards(&["group-check", "--p", "13", "--t", "1", "--mode", "projective"]);
    assert_eq!(o.status.code(), Some(2));
    let o = edwards(&["group-check", "--p", "15", "--c", "1", "--d", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn add_layers() {
    let o = edwards(&["add", "--p", "13", "--c", "1", "--d", "2", "--P", "0,1", "--Q", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "12,0");

    let o = edwards(&["add", "--p", "13", "--c", "1", "--d", "2", "--P", "1,1", "--Q", "0,1"]);
    assert_eq!(o.status.code(), Some(2), "off-curve point must be rejected");

    let o = edwards(&["add", "--p", "13", "--t", "2", "--P", "1,0", "--Q", "0,1", "--layer", "projective", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"], "0,1;0");
}

#[test]
fn add_reports_vanishing_denominator() {
    // x2*y1 - x1*y2 = 0 for P = Q = (0, 1)
    let o = edwards(&["add", "--p", "13", "--t", "2", "--P", "0,1", "--Q", "0,1", "--layer", "affine1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not summable: delta_1 vanishes"), "{}", stdout(&o));
}

#[test]
fn enumerate_counts() {
    let o = edwards(&["enumerate", "--p", "29", "--t", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 20);
    assert_eq!(v["e_oo"], 16);
    assert_eq!(v["classes"].as_array().unwrap().len(), 24);
}

#[test]
fn export_cert_round_trip_and_unknown_name() {
    let o = edwards(&["export-cert", "closure"]);
    assert_eq!(o.status.code(), Some(0));
    let json: CertJson = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json.name, "closure");
    assert!(verify_certificate(&Certificate::from_json(&json).unwrap()).passed);

    let o = edwards(&["export-cert", "no_such_identity"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(edwards(&["group-check", "--bogus"]).status.code(), Some(2));
    assert_eq!(edwards(&[]).status.code(), Some(2));
}
