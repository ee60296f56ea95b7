use std::process::{Command, Output};

use laguerre_core::sweep::ErrorCurve;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laguerre")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn curve(csv: &str) -> ErrorCurve {
    let (ns, errors) = rows(csv).iter().map(|r| (r[0].parse::<usize>().unwrap(), r[1].parse::<f64>().unwrap().abs())).unzip();
    ErrorCurve { ns, errors }
}

#[test]
fn single_gauss_point() {
    let csv = stdout(&["nodes", "--alpha", "0", "--n", "1", "--kind", "gauss"]);
    assert!(csv.starts_with("index,node,weight\n"));
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "0");
    assert_eq!(r[0][1].parse::<f64>().unwrap(), 1.0);
    assert!((r[0][2].parse::<f64>().unwrap() - 1.0).abs() <= 4.0 * f64::EPSILON);
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let args = ["coeffs", "--fn", "f2", "--alpha", "1.5", "--nmax", "60", "--form", "glf"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert_eq!(text.lines().next(), Some("n,coefficient"));
    for r in rows(&text) {
        // d.dddddddddddddddde[-]x: 17 significant digits
        let mantissa = r[1].trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{}", r[1]);
    }
}

#[test]
fn json_twin_matches_csv() {
    let cases: [&[&str]; 7] = [
        &["nodes", "--alpha", "0.5", "--n", "5", "--kind", "radau"],
        &["coeffs", "--fn", "f1", "--alpha", "0", "--nmax", "10"],
        &["project", "--fn", "glf1", "--alpha", "0", "--nmax", "20", "--norm", "max"],
        &["interp", "--fn", "recip_sq9", "--alpha", "0", "--points", "radau", "--form", "poly", "--nmax", "12"],
        &["weeks", "--pair", "exp", "--n", "16", "--t", "0.5,2"],
        &["oracle", "--fn", "f1", "--k", "3", "--rho", "0.9"],
        &["list"],
    ];
    for args in cases {
        let csv = stdout(args);
        let mut json_args = args.to_vec();
        json_args.push("--json");
        let v: Value = serde_json::from_str(&stdout(&json_args)).unwrap();
        assert_eq!(v["schema_version"], "1", "{args:?}");
        let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
        let columns: Vec<&str> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        assert_eq!(header, columns, "{args:?}");
        assert_eq!(v["rows"].as_array().unwrap().len(), csv.lines().count() - 1, "{args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["nodes", "--alpha", "0", "--n", "1", "--kind", "gauss", "--bogus"][..],
        &["nodes", "--alpha", "0", "--n", "1", "--kind", "lobatto"],
        &["coeffs", "--fn", "bogus", "--alpha", "0", "--nmax", "3"],
        &["weeks", "--pair", "bogus", "--n", "8", "--t", "1"],
        &["coeffs", "--fn", "f1", "--alpha", "-2", "--nmax", "3"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn rate_gate_exit_codes() {
    let base = ["rate", "--fn", "f1", "--mode", "coeff", "--nmax", "300"];
    assert_eq!(run(&base).status.code(), Some(0));
    let mut tight = base.to_vec();
    tight.extend(["--tol", "1e-6"]);
    let out = run(&tight);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    // an entire function has no root-exponential prediction
    assert_eq!(run(&["rate", "--fn", "exp", "--mode", "coeff"]).status.code(), Some(1));
}

#[test]
fn rate_json_reports_fit_and_prediction() {
    let v: Value =
        serde_json::from_str(&stdout(&["rate", "--fn", "f2", "--mode", "proj-weighted", "--nmax", "200", "--json"])).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["n", "error", "predicted"]));
    assert_eq!(v["meta"]["pass"], true);
    assert_eq!(v["meta"]["predicted"]["sqrt_slope"], 3.0);
}

#[test]
fn out_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rule.csv");
    let args = ["nodes", "--alpha", "0", "--n", "4", "--kind", "gauss"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = run(&with_out);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&args));
}

#[test]
fn coefficient_table_decays_at_predicted_rate() {
    let c = curve(&stdout(&["coeffs", "--fn", "f1", "--alpha", "0", "--nmax", "400"])).window(25, 400);
    let fit = c.fit(1e-13).unwrap();
    assert!((fit.sqrt_slope - 2.0).abs() <= 0.1, "{fit:?}");
}

#[test]
fn quadrature_table_decays_at_predicted_rate() {
    let c = curve(&stdout(&["quad", "--fn", "f1", "--alpha", "0", "--nmax", "60"])).window(5, 60);
    let fit = c.fit_envelope(1e-13, 0.0).unwrap();
    assert!((fit.sqrt_slope - 4.0).abs() <= 0.4, "{fit:?}");
}

#[test]
fn interpolant_values_flag_extrapolation() {
    let csv = stdout(&["interp", "--fn", "exp_recip1p", "--alpha", "0", "--nmax", "10", "--at", "0,1,200"]);
    let flags: Vec<String> = rows(&csv).iter().map(|r| r[4].clone()).collect();
    assert_eq!(flags, ["0", "0", "1"]);
}

#[test]
fn weeks_table_has_exact_and_error() {
    let r = rows(&stdout(&["weeks", "--pair", "exp", "--sigma", "1", "--nu", "2", "--n", "32", "--t", "1"]));
    let v: Vec<f64> = r[0].iter().map(|c| c.parse().unwrap()).collect();
    assert!((v[2] - (-1f64).exp()).abs() <= 1e-15);
    assert!(v[3] <= 1e-10 && v[3] == (v[2] - v[1]).abs());
}
