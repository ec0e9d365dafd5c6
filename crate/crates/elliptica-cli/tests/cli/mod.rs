//! Binary-level checks of the exit-code contract, report shape and
//! configuration round-trips.

use std::process::Command;

use clap::Parser;
use proptest::prelude::*;

use elliptica_cli::RunConfig;

fn run(args: &[String]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_elliptica"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn strs(args: &[&str]) -> Vec<String> {
    args.iter().map(|s| s.to_string()).collect()
}

#[test]
fn report_has_schema_and_complex_pairs() {
    let (code, out, _) = run(&strs(&["rmatrix", "--check", "ybe", "--samples", "2", "--q", "0.6", "--p", "0.25"]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "rmatrix");
    assert_eq!(v["params"]["q"], serde_json::json!([0.6, 0.0]));
    let report = &v["reports"][0];
    for key in ["check_name", "seed", "sample_points", "residuals", "tolerance", "passed"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn output_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let (code, out, _) = run(&strs(&[
        "table",
        "--z-samples",
        "2",
        "--output",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(text.contains("\"schema\": 1"));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("check,sample,point,residual"));
    assert_eq!(rows.lines().count(), 1 + 17 * 2);
}

#[test]
fn max_terms_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_elliptica"))
        .args(["rmatrix", "--check", "ybe", "--samples", "1"])
        .env("ELLIPTICA_MAX_TERMS", "2")
        .output()
        .unwrap();
    // two terms are far too few to converge; every sample fails
    assert_eq!(out.status.code(), Some(1));
    let bad = Command::new(env!("CARGO_BIN_EXE_elliptica"))
        .args(["rmatrix", "--check", "ybe", "--samples", "1"])
        .env("ELLIPTICA_MAX_TERMS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn theta_value_and_zero() {
    let (code, out, _) = run(&strs(&["theta", "--xi", "0", "--tau", "0.5i"]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let re = v["data"]["value"][0].as_f64().unwrap();
    let im = v["data"]["value"][1].as_f64().unwrap();
    assert!(re.hypot(im) < 1e-14);
}

#[test]
fn usage_errors_go_to_stderr() {
    let (code, out, err) = run(&strs(&["rmatrix", "--q", "zz"]));
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn config_round_trips_through_json() {
    for argv in [
        vec!["elliptica", "rmatrix", "--n", "3", "--q", "0.5+0.1i", "--seed", "9"],
        vec!["elliptica", "surface", "--solve", "--ell", "-2", "--c", "-2/3", "--window", "-5..5"],
        vec!["elliptica", "exchange", "--ell", "1", "--ell-prime", "7", "--z", "0.8", "--z", "-0.1+0.7i"],
    ] {
        let cfg = RunConfig::try_parse_from(&argv).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}

fn malformed_value() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("".to_string()),
        "[a-z]{1,6}",
        Just("1+".to_string()),
        Just("nan".to_string()),
        Just("1/0".to_string()),
        Just("--".to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, .. ProptestConfig::default() })]

    /// Any malformed value for a numeric flag is a usage error.
    #[test]
    fn malformed_numeric_flags_exit_2(
        flag in prop::sample::select(vec!["--q", "--p", "--s", "--samples", "--tol", "--seed", "--n"]),
        value in malformed_value(),
    ) {
        let args = vec!["rmatrix".to_string(), flag.to_string(), value];
        let (code, _, _) = run(&args);
        prop_assert_eq!(code, 2);
    }

    /// Unknown flags are rejected whatever the subcommand.
    #[test]
    fn unknown_flags_exit_2(
        sub in prop::sample::select(vec!["theta", "rmatrix", "exchange", "surface", "table", "rhsplit", "classical", "vo"]),
        name in "[a-z]{3,8}",
    ) {
        let args = vec![sub.to_string(), format!("--zz{name}")];
        let (code, _, _) = run(&args);
        prop_assert_eq!(code, 2);
    }
}
