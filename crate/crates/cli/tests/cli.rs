use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_subelliptic");

fn run_in(dir: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("SUBELLIPTIC_OUT_DIR");
    if let Some(d) = dir {
        cmd.env("SUBELLIPTIC_OUT_DIR", d);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(None, args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&doc).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

/// Small configurations of every command, cheap enough to run twice.
fn small_jobs() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("verify-identities", vec!["--model", "su2", "--count", "10", "--points", "5"]),
        ("liyau-coeffs", vec!["--profile", "exp", "--alpha", "4", "--rho", "1", "--t", "2"]),
        ("check-liyau", vec!["--route", "mc", "--model", "su2", "--t", "0.5", "--points", "2", "--paths", "2000"]),
        ("optimize-v", vec!["--mode", "grid-search", "--eps-points", "6", "--gamma-points", "6", "--grid-sweeps", "5"]),
        ("optimize-v", vec!["--rho", "1", "--t-grid", "10,20,30"]),
        ("spectral-gap", vec!["--paths", "4000", "--t-grid", "0.1,0.2,0.3", "--poincare-samples", "2000"]),
        ("cc-distance", vec!["--model", "su2", "--y", "exp:0.5,0.2,0.3", "--controls", "16"]),
        ("diameter", vec!["--n-pairs", "2", "--controls", "16"]),
        ("short-time", vec!["--paths", "4000", "--pilot-paths", "1000", "--n-times", "4"]),
    ]
}

#[test]
fn liyau_coeffs_power_example() {
    let out = run(&["liyau-coeffs", "--profile", "power", "--alpha", "3", "--rho", "0", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let d = json(&out);
    assert_valid("liyau-coeffs", &d);
    assert_eq!(d["c_rate"].as_f64(), Some(4.0));
    assert_eq!(d["c_const"].as_f64(), Some(64.0));
    assert!((d["c_z"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(d["agreement"].as_f64().unwrap() <= 1e-6);
    assert!((d["quadrature"]["c_const"].as_f64().unwrap() - 16.0).abs() < 1e-8);
}

#[test]
fn verify_identities_heisenberg_seed_7() {
    let out = run(&["verify-identities", "--model", "heisenberg", "--seed", "7", "--count", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let d = json(&out);
    assert_valid("verify-identities", &d);
    assert_eq!(d["count"], 100);
}

#[test]
fn unknown_flag_is_usage_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(Some(dir.path()), &["liyau-coeffs", "--profile", "power", "--alpha", "3", "--t", "1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["liyau-coeffs", "--profile", "power", "--alpha", "2", "--t", "1"],
        &["liyau-coeffs", "--profile", "power", "--alpha", "3", "--t", "0"],
        &["liyau-coeffs", "--profile", "exp", "--alpha", "3", "--rho", "0", "--t", "1"],
        &["optimize-v", "--gamma", "3.1", "--rho", "1"],
        &["optimize-v", "--eps-min", "1.5"],
        &["check-liyau", "--route", "grid", "--model", "su2", "--t", "1"],
        &["check-liyau", "--route", "mc", "--t", "1", "--f", "ln(x)"],
        &["check-liyau", "--route", "mc", "--t", "1", "--paths", "10"],
        &["spectral-gap", "--t-grid", "0.5,0.2"],
        &["cc-distance", "--y", "exp:1,2"],
        &["cc-distance", "--model", "su2", "--y", "entries:2,0,0,0,0,0,1,0"],
        &["short-time", "--t-min", "0.1", "--t-max", "0.15"],
        &["diameter", "--n-pairs", "0"],
        &["--threads", "0", "diameter"],
        &["verify-identities", "--model", "torus"],
    ];
    for args in cases {
        let out = run_in(Some(dir.path()), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn numeric_failure_emits_diagnostic() {
    let out = run(&["spectral-gap", "--f", "1", "--paths", "2000"]);
    assert_eq!(out.status.code(), Some(3));
    let d: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_valid("error", &d);
    assert_eq!(d["error"], "fit_rejected");

    let out = run(&["check-liyau", "--route", "grid", "--t", "1", "--f", "exp(x)"]);
    assert_eq!(out.status.code(), Some(3));
    let d: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(d["error"], "boundary_flux");
}

#[test]
fn every_command_matches_its_schema() {
    for (cmd, args) in small_jobs() {
        let mut all = vec![cmd];
        all.extend(&args);
        let out = run(&all);
        assert!(
            matches!(out.status.code(), Some(0) | Some(1)),
            "{all:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_valid(cmd, &json(&out));
    }
}

#[test]
fn reruns_are_byte_identical() {
    for (cmd, args) in small_jobs() {
        for format in ["json", "csv"] {
            let mut all = vec![cmd, "--format", format];
            all.extend(&args);
            let a = run(&all);
            let b = run(&all);
            assert!(!a.stdout.is_empty(), "{all:?}");
            assert_eq!(a.stdout, b.stdout, "{all:?}");
        }
    }
}

#[test]
fn out_dir_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(Some(dir.path()), &["--plot", "optimize-v", "--rho", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("optimize-v.json")).unwrap()).unwrap();
    assert_eq!(doc["mode"], "decay");
    let csv = fs::read_to_string(dir.path().join("optimize-v.csv")).unwrap();
    assert!(csv.starts_with("t,eps_upper,eps_lower,upper,lower,width,order_ratio\n"));
    assert_eq!(csv.lines().count(), 8);
    let svg = fs::read_to_string(dir.path().join("optimize-v.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));

    let explicit = dir.path().join("nested/coeffs.csv");
    let out = run(&[
        "--format",
        "csv",
        "--out",
        explicit.to_str().unwrap(),
        "liyau-coeffs",
        "--profile",
        "power",
        "--alpha",
        "3",
        "--t",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&explicit).unwrap();
    assert_eq!(text.lines().next(), Some("source,c_gamma,c_z,c_rate,c_const"));

    assert_eq!(run(&["--plot", "optimize-v", "--rho", "1"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_one() {
    // Before the asymptotic regime the fitted slope is about twice the limit.
    let out = run(&["optimize-v", "--rho", "1", "--t-grid", "8,9"]);
    let code = out.status.code();
    let d = json(&out);
    assert_eq!(code, Some(if d["passed"].as_bool().unwrap() { 0 } else { 1 }));
    assert_eq!(d["passed"], false, "slope {}", d["slope"]);
}

#[test]
fn heisenberg_distance_oracle() {
    let out = run(&["cc-distance", "--y", "exp:0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let d = json(&out)["distance"].as_f64().unwrap();
    let exact = (4.0 * std::f64::consts::PI).sqrt();
    assert!(d >= exact * (1.0 - 1e-6) && d <= exact * 1.01, "{d} vs {exact}");
}
