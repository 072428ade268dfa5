use qsm_cli::{run_with, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qsm").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn decimal(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn bc_state_half_at_beta_two() {
    let doc = json(&["bc-state", "--beta", "2", "--r", "1/2", "--rho", "1", "--mod", "2", "--cutoff", "100000"]);
    assert_eq!(doc["tool"], "qsm");
    assert_eq!(doc["command"], "bc-state");
    assert_eq!(doc["params"]["cutoff"], "100000");
    let re = decimal(&doc["result"]["value"]["re"]);
    assert!((re + 0.5).abs() < 1e-4);
    assert!(decimal(&doc["result"]["tail_bound"]) > 0.0);
    assert!(doc["provenance"].as_str().unwrap().contains("truncated"));
}

#[test]
fn polylog_route_agrees() {
    let g = json(&["bc-state", "--beta", "3", "--r", "1/4", "--cutoff", "10000"]);
    let p = json(&["bc-state", "--beta", "3", "--r", "1/4", "--cutoff", "10000", "--route", "polylog"]);
    for k in ["re", "im"] {
        let d = decimal(&g["result"]["value"][k]) - decimal(&p["result"]["value"][k]);
        assert!(d.abs() < 1e-8, "{k}");
    }
}

#[test]
fn low_temperature_is_exact() {
    let doc = json(&["bc-state", "--beta", "1", "--r", "1/2"]);
    assert_eq!(doc["result"]["exact"], true);
    assert_eq!(doc["result"]["tail_bound"], "0");
}

#[test]
fn class_group_minus_23() {
    let doc = json(&["class-group", "-D", "-23"]);
    assert_eq!(doc["result"]["h"], 3);
    let (code, out, _) = run(&["class-group", "-D", "-23", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("index,a,b,c,order"));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn cm_state_quarter() {
    let doc = json(&["cm-state", "-D", "-4", "--beta", "2", "--f", "eJ(2,2)", "--norm-bound", "100000"]);
    assert!((decimal(&doc["result"]["value"]["re"]) - 0.25).abs() < 1e-3);
}

#[test]
fn hilbert_poly_minus_23() {
    let doc = json(&["hilbert-poly", "-D", "-23"]);
    let poly: Vec<&str> = doc["result"]["poly"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(poly, ["12771880859375", "-5151296875", "3491750", "1"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["class-group", "-D", "-12"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["bc-state", "--beta", "0.5", "--r", "1/2", "--route", "polylog"]).0, EXIT_OK);
    assert_eq!(run(&["zeta", "--beta", "1"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["bc-state", "--beta", "two", "--r", "1/2"]).0, EXIT_USAGE);
    assert_eq!(run(&["bc-state", "--beta", "2", "--r", "1/2", "--bogus", "1"]).0, EXIT_USAGE);
    assert_eq!(run(&["nonsense"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn help_documents_csv_columns() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("CSV columns"));
    assert!(out.contains("k,modulus"));
}

#[test]
fn exact_output_is_byte_stable() {
    let a = run(&["bc-ground", "--r", "1/3", "--rho", "2", "--mod", "3"]).1;
    let b = run(&["bc-ground", "--r", "1/3", "--rho", "2", "--mod", "3"]).1;
    assert_eq!(a, b);
}

#[test]
fn precision_flag_controls_digits() {
    let (_, out, _) = run(&["zeta", "--beta", "2", "--cutoff", "100", "--precision", "20", "--format", "csv"]);
    let re = out.lines().nth(1).unwrap().split(',').next().unwrap();
    assert!(re.trim_start_matches('-').replace('.', "").len() <= 21, "{re}");
}
