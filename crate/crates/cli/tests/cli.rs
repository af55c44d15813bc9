use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn avgop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avgop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("single JSON object")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("avgop-cli-{}-{name}", std::process::id()))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = temp_path(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn report<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["verdict"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["property"] == name && r.get("form").is_none())
        .unwrap_or_else(|| panic!("no {name} report"))
}

#[test]
fn verify_strong_operator_exits_zero() {
    let o = avgop(&["verify", "--op", "mean", "--dim", "2", "--samples", "3000", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["verdict"]["classification"], "strong");
    assert_eq!(doc["config"]["samples"], 3000);
    assert_eq!(doc["config"]["resolved_operator"]["dim"], 2);
    assert!(doc["version"].is_string());
    assert!(doc["timestamp"].is_u64());
}

#[test]
fn verify_p_laplacian_d3_is_weak_with_vi_witness() {
    let o = avgop(&[
        "verify", "--op", "p-laplacian", "--p", "3", "--dim", "3", "--samples", "3000", "--seed", "7",
        "--json",
    ]);
    assert_eq!(code(&o), 1);
    let doc = json(&o);
    assert_eq!(doc["verdict"]["classification"], "weak");
    let vi = report(&doc, "property-vi");
    assert_eq!(vi["verdict"], "fail");
    assert_eq!(vi["witness"]["inputs"][0].as_array().unwrap().len(), 6);
}

#[test]
fn verify_median_is_non_averaging() {
    let o = avgop(&["verify", "--op", "median", "--dim", "2", "--samples", "3000", "--json"]);
    assert_eq!(code(&o), 1);
    let doc = json(&o);
    assert_eq!(doc["verdict"]["classification"], "non-averaging");
    assert_eq!(report(&doc, "ellipticity")["verdict"], "fail");
    assert!(doc["verdict"]["estimated_lambda"].is_null());
}

#[test]
fn verify_text_mode_lists_classification() {
    let o = avgop(&["verify", "--op", "infinity", "--samples", "2000"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("monotone-strict"));
    assert!(text.trim_end().ends_with("classification  weak"), "{text}");
}

#[test]
fn solve_delta_boundary() {
    let boundary = write_temp(
        "delta.json",
        r#"{"dim": 2, "n": 1, "default": 0, "points": [{"x": [1, 0], "value": 1}]}"#,
    );
    let out = temp_path("delta.csv");
    let o = avgop(&[
        "solve", "--op", "mean", "--boundary", boundary.to_str().unwrap(), "--out",
        out.to_str().unwrap(), "--json", "--no-timestamp",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["verdict"]["origin_value"], 0.25);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.lines().any(|l| l == "0,0,2.5000000000000000e-1"), "{csv}");
}

#[test]
fn solve_random_infinity_converges() {
    let o = avgop(&[
        "solve", "--op", "infinity", "--dim", "2", "--n", "20", "--tol", "1e-10", "--json",
        "--no-timestamp",
    ]);
    assert_eq!(code(&o), 0);
    let rep = &json(&o)["verdict"]["report"];
    assert_eq!(rep["converged"], true);
    assert!(rep["final_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn solve_refuses_p_near_one() {
    let o = avgop(&["solve", "--op", "p-laplacian", "--p", "1.05", "--dim", "2", "--n", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("too close to 1"), "{}", stderr(&o));
}

#[test]
fn solve_rejects_bad_boundary_files() {
    let malformed = write_temp("bad.json", "{\"dim\": 2,");
    let o = avgop(&["solve", "--op", "mean", "--boundary", malformed.to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    let ok = write_temp("ok.json", r#"{"dim": 2, "n": 2, "default": 1}"#);
    let o = avgop(&["solve", "--op", "mean", "--n", "3", "--boundary", ok.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("does not match"));

    let inside = write_temp(
        "inside.json",
        r#"{"dim": 2, "n": 2, "default": 1, "points": [{"x": [0, 0], "value": 3}]}"#,
    );
    let o = avgop(&["solve", "--op", "mean", "--boundary", inside.to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    let o = avgop(&["solve", "--op", "mean", "--boundary", "/nonexistent/avgop.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn solve_reports_non_convergence() {
    let o = avgop(&["solve", "--op", "mean", "--n", "6", "--max-sweeps", "2"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("NOT converged"));
}

#[test]
fn counterexample_records() {
    let o = avgop(&["counterexample", "--case", "p-small", "--p", "1.5", "--json"]);
    assert_eq!(code(&o), 0);
    let rec = &json(&o)["records"][0];
    assert_eq!(rec["gamma"], 4.0);
    assert_eq!(rec["violation"], 1.1875);
    assert!(rec["identity_residual"].as_f64().unwrap() <= 1e-9);

    let o = avgop(&["counterexample", "--case", "weighted", "--a", "0.25", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["records"][0]["r"], 3.0);

    let o = avgop(&["counterexample", "--case", "p-large", "--p", "3", "--gamma", "1.4"]);
    assert_eq!(code(&o), 2);

    // Close to 2 the construction no longer violates anything.
    let o = avgop(&["counterexample", "--case", "p-small", "--p", "1.99"]);
    assert_eq!(code(&o), 1);

    let o = avgop(&["counterexample", "--case", "weighted", "--p", "2", "--a", "0.3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn gamma_records() {
    let o = avgop(&[
        "gamma", "--op", "weighted", "--weights", "0.25,0.75", "--n", "2,4", "--trials", "3",
        "--json", "--no-timestamp",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let est = &json(&o)["records"][0];
    assert_eq!(est["dim"], 1);
    assert_eq!(est["per_radius"].as_array().unwrap().len(), 2);
    assert!((est["root"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn harnack_and_growth_emit_json_lines() {
    for cmd in ["harnack", "growth"] {
        let o = avgop(&[
            cmd, "--op", "p-harmonious", "--alpha", "0.5", "--n", "4", "--trials", "5", "--json",
            "--no-timestamp",
        ]);
        assert_eq!(code(&o), 0, "{cmd}: {}", stderr(&o));
        let lines: Vec<Value> = stdout(&o)
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 5);
        for (i, l) in lines.iter().enumerate() {
            assert_eq!(l["command"], cmd);
            assert_eq!(l["verdict"]["trial"], i);
            assert_eq!(l["verdict"]["holds"], true);
        }
    }
    let o = avgop(&["harnack", "--op", "eikonal-plus", "--n", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "verify", "--op", "p-harmonious", "--p", "4", "--dim", "3", "--samples", "2000", "--seed",
        "11", "--json", "--no-timestamp",
    ];
    let a = avgop(&args);
    let b = avgop(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("timestamp"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&avgop(&["verify"])), 2);
    assert_eq!(code(&avgop(&["verify", "--op", "mean", "--alpha", "0.2"])), 2);
    assert_eq!(code(&avgop(&["verify", "--op", "p-laplacian"])), 2);
    assert_eq!(code(&avgop(&["verify", "--op", "weighted-mean", "--weights", "0.5,0.5", "--dim", "2"])), 2);
    assert_eq!(code(&avgop(&["verify", "--op", "mean", "--samples", "0"])), 2);
    assert_eq!(code(&avgop(&["gamma", "--op", "mean", "--trials", "0"])), 2);
    assert_eq!(code(&avgop(&["--version"])), 0);
}
