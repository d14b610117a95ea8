use std::io::Write;
use std::process::{Command, Output};

use modheat::symbol::{from_json, PolyJson};
use modheat::verify::{Report, CSV_HEADER};

fn modheat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modheat")).args(args).output().expect("spawn modheat")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn first_value(o: &Output) -> f64 {
    stdout(o).lines().next().unwrap().trim().parse().unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn eval_examples() {
    let o = modheat(&["eval", "2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!((first_value(&o) - 2.0 * 2f64.ln()).abs() < 1e-9);

    let o = modheat(&["eval", "h_alpha", "--alpha", "2,1", "--z", "0", "--m", "4"]);
    assert!((first_value(&o) - 1.0).abs() < 1e-9);

    let o = modheat(&["eval", "k_delta", "--y", "1", "--m", "2"]);
    assert!((first_value(&o) - 1.0 / 6.0).abs() < 1e-9);

    let o = modheat(&["eval", "2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "-0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["function"], "2f1");
    assert!((v["value"].as_f64().unwrap() - 2.0 * 1.5f64.ln()).abs() < 1e-12);
}

#[test]
fn k_routes_agree_through_the_cli() {
    let vals: Vec<f64> = ["h-alpha", "hyper", "closed"]
        .iter()
        .map(|r| {
            first_value(&modheat(&["eval", "k_delta", "--y", "0.6", "--m", "3.5", "--route", r, "--digits", "16"]))
        })
        .collect();
    assert!((vals[0] - vals[1]).abs() < 1e-8 && (vals[0] - vals[2]).abs() < 1e-8, "{vals:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&modheat(&["eval", "k_delta", "--y", "-1", "--m", "2"])), 2);
    assert_eq!(code(&modheat(&["eval", "k_delta", "--y", "1"])), 2);
    assert_eq!(code(&modheat(&["eval", "2f1", "--a", "1", "--b", "1", "--c", "-1", "--z", "0.3"])), 2);
    assert_eq!(
        code(&modheat(&["eval", "2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "0.3", "--route", "closed"])),
        2
    );
    assert_eq!(code(&modheat(&["verify", "no-such-identity"])), 2);
    assert_eq!(code(&modheat(&["frobnicate"])), 2);
    assert_eq!(code(&modheat(&["verify", "gauss-bonnet"])), 0);
    assert_eq!(code(&modheat(&["verify", "gauss-bonnet", "--tol", "1e-30"])), 1);
}

#[test]
fn derive_b2_json_round_trips() {
    let o = modheat(&["derive-b2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["b2", "b2_integrated"] {
        let p: PolyJson = serde_json::from_value(v[key].clone()).unwrap();
        assert_eq!(p.terms.len(), 6, "{key}");
        from_json(&p).unwrap();
    }
}

#[test]
fn derive_b2_latex() {
    let o = modheat(&["derive-b2", "--format", "latex"]);
    let text = stdout(&o);
    assert!(
        text.lines().any(|l| l.contains("\\frac{4}{m}") && l.contains("b_0^{3} k^{2} (\\nabla^2 k)_{jj}")),
        "{text}"
    );
    assert!(text.contains("\\frac{8}{m} r^{6}"));
}

#[test]
fn verify_json_matches_schema() {
    let v = schema();
    for id in ["contiguous", "gauss-bonnet", "cm-relation", "recursion-m"] {
        let o = modheat(&["verify", id, "--samples", "10", "--format", "json"]);
        assert_eq!(code(&o), 0, "{id}");
        let js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v.is_valid(&js), "{id}: {:?}", v.iter_errors(&js).map(|e| e.to_string()).collect::<Vec<_>>());
        let r = Report::from_json(&stdout(&o)).unwrap();
        assert!(r.passed);
    }
}

#[test]
fn full_report_matches_schema() {
    let o = modheat(&["report", "--samples", "10", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(schema().is_valid(&js));
    assert_eq!(js["identities"].as_array().unwrap().len(), 7);
}

#[test]
fn csv_header_and_rows() {
    let o = modheat(&["verify", "cm-relation", "--m", "3,4", "--grid", "0.5,2,4", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 4 * 4);
    assert!(rows.iter().all(|r| r.starts_with("cm-relation,") && r.split(',').count() == 5));
}

#[test]
fn fixed_seed_is_deterministic() {
    let args = ["verify", "transforms", "--samples", "25", "--seed", "42", "--format", "json"];
    assert_eq!(modheat(&args).stdout, modheat(&args).stdout);
    let other = modheat(&["verify", "transforms", "--samples", "25", "--seed", "43", "--format", "json"]);
    assert_ne!(modheat(&args).stdout, other.stdout);
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |n: &str| {
        Command::new(env!("CARGO_BIN_EXE_modheat"))
            .args(["verify", "route-agreement", "--format", "json"])
            .env("MODHEAT_THREADS", n)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(code(&run("0")), 2);
    assert_eq!(code(&run("many")), 2);
}

#[test]
fn saved_report_re_renders() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let o = modheat(&[
        "report",
        "--identities",
        "contiguous,gauss-bonnet",
        "--samples",
        "10",
        "--format",
        "json",
        "--output",
        p,
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = stdout(&modheat(&["report", "--input", p, "--format", "text"]));
    assert!(text.contains("PASS contiguous") && text.contains("PASS gauss-bonnet"), "{text}");
    assert!(text.trim_end().ends_with("overall: PASS"));
    std::fs::write(&path, "{\"schema\": \"other\"}").unwrap();
    assert_eq!(code(&modheat(&["report", "--input", p])), 2);
}

#[test]
fn config_file_overrides_defaults() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "format = \"csv\"\n[suites.cm-relation]\nm = [3.0]\ngrid = {{ min = 0.5, max = 2.0, count = 3 }}")
        .unwrap();
    let o = modheat(&["--config", f.path().to_str().unwrap(), "verify", "cm-relation"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with(CSV_HEADER));
    assert_eq!(text.lines().count(), 1 + 9);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "[tolerances]\nseries = -1.0").unwrap();
    assert_eq!(code(&modheat(&["--config", bad.path().to_str().unwrap(), "verify", "gauss-bonnet"])), 2);
}
