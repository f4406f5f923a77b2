use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monopole-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).unwrap_or(Value::Null), out.status.code().unwrap())
}

fn values(report: &Value) -> Vec<f64> {
    report["results"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("monopole-spectra-{}-{name}", std::process::id()))
}

#[test]
fn kepler5d_levels() {
    let (r, code) = json(&["spectrum", "kepler5d", "--c0", "1", "--c1", "0", "--c2", "0", "--l4", "0", "--T", "0", "--p-max", "3"]);
    assert_eq!(code, 0);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["checks", "command", "params", "results", "version"]);
    let expect = [-1.0 / 8.0, -1.0 / 18.0, -1.0 / 32.0, -1.0 / 50.0];
    for (v, e) in values(&r).iter().zip(expect) {
        assert!((v - e).abs() <= 1e-15, "{v} vs {e}");
    }
    let row = &r["results"][0];
    for key in ["labels", "value", "oracle", "abs_diff", "rel_diff", "tolerance", "oracle_id"] {
        assert!(!row[key].is_null(), "missing {key}");
    }
    assert_eq!(r["command"]["name"], "spectrum kepler5d");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn osc8d_levels_and_fillings() {
    let (r, code) = json(&["spectrum", "osc8d", "--omega", "1", "--lambda1", "0", "--lambda2", "0", "--levels", "3"]);
    assert_eq!(code, 0);
    assert_eq!(values(&r), vec![4.0, 6.0, 8.0]);
    let fillings: Vec<u64> = r["results"].as_array().unwrap().iter().map(|x| x["degeneracy"].as_u64().unwrap()).collect();
    assert_eq!(fillings, vec![1, 2, 3]);
}

#[test]
fn empty_ranges() {
    let (r, code) = json(&["spectrum", "kepler5d", "--p-min", "3", "--p-max", "2"]);
    assert_eq!(code, 0);
    assert!(r["results"].as_array().unwrap().is_empty());
    let (r, code) = json(&["spectrum", "osc8d", "--levels", "0"]);
    assert_eq!(code, 0);
    assert!(r["results"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["spectrum", "kepler5d", "--c0", "-1"][..],
        &["spectrum", "kepler5d", "--T", "0.3"],
        &["spectrum", "kepler5d", "--T", "1"],
        &["spectrum", "osc8d", "--omega", "0"],
        &["spectrum", "kepler5d", "--bogus", "1"],
        &["verify", "ode", "--levels", "0"],
        &["verify", "residuals", "--convention", "as-printed", "--J", "0.5"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn coarse_mesh_exits_3() {
    let out = run(&["verify", "ode", "--picture", "osc-radial", "--Gamma", "16", "--mesh", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("convergence"));
}

#[test]
fn failed_check_exits_4() {
    let out = run(&["verify", "residuals", "--convention", "as-printed"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL interior residual"));
}

#[test]
fn verify_algebra_example() {
    let (r, code) = json(&["verify", "algebra", "--p", "4", "--c0", "1", "--c1", "0.5", "--c2", "0.5", "--l4", "1", "--T", "0.5"]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_ode_examples() {
    let (r, code) = json(&["verify", "ode", "--picture", "kepler-radial", "--Lambda", "0", "--levels", "3", "--mesh", "4000"]);
    assert_eq!(code, 0);
    for (v, n) in values(&r).iter().zip(2..) {
        let e = -1.0 / (2.0 * (n * n) as f64);
        assert!((v - e).abs() <= 1e-6 * e.abs());
    }
    for picture in ["kepler-angular", "osc-radial", "osc-angular", "cylindrical", "parabolic"] {
        let (r, code) = json(&["verify", "ode", "--picture", picture, "--levels", "3", "--c1", "0.5", "--lambda1", "0.5"]);
        assert_eq!(code, 0, "{picture}: {r}");
        assert_eq!(values(&r).len(), 3);
    }
}

#[test]
fn verify_duality_small() {
    let (r, code) = json(&["verify", "duality", "--grid", "small"]);
    assert_eq!(code, 0);
    let rows = r["results"].as_array().unwrap();
    assert!(rows.len() > 1000);
    assert!(rows.iter().all(|x| x["rel_diff"].as_f64().unwrap() <= 1e-12));
}

#[test]
fn verify_residuals_default() {
    let (r, code) = json(&["verify", "residuals", "--c1", "1.5", "--c2", "0.5", "--J", "0.5", "--L", "1"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn config_file_with_flag_override() {
    let path = temp_path("run.cfg");
    std::fs::write(&path, "# batch\nc0 = 2\np_max = 1\n").unwrap();
    let (r, code) = json(&["spectrum", "kepler5d", "--config", path.to_str().unwrap(), "--c0", "1"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(r["params"]["c0"], 1.0);
    assert_eq!(values(&r), vec![-0.125, -1.0 / 18.0]);
}

#[test]
fn bad_config_exits_2() {
    let path = temp_path("bad.cfg");
    std::fs::write(&path, "c0 2\n").unwrap();
    let out = run(&["spectrum", "kepler5d", "--config", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["spectrum", "kepler5d", "--config", "/nonexistent/run.cfg"]).status.code(), Some(2));
}

#[test]
fn csv_flattens_json_rows() {
    let args = ["spectrum", "kepler5d", "--c1", "0.5", "--c2", "1.5", "--l4", "1", "--T", "0.5", "--p-max", "4"];
    let (r, _) = json(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = run(&csv_args);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let json_rows = r["results"].as_array().unwrap();
    assert_eq!(rows.len(), json_rows.len());
    for (rec, jr) in rows.iter().zip(json_rows) {
        for (name, cell) in header.iter().zip(rec.iter()) {
            let expect = match name.strip_prefix("labels.") {
                Some(k) => jr["labels"][k].clone(),
                None => jr[name].clone(),
            };
            match expect {
                Value::Number(n) => assert_eq!(cell.parse::<f64>().unwrap(), n.as_f64().unwrap(), "{name}"),
                Value::String(s) => assert_eq!(cell, s),
                other => panic!("{name}: unexpected {other}"),
            }
        }
    }
}

#[test]
fn plain_output_uses_six_digits() {
    let out = run(&["spectrum", "kepler5d", "--p-max", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-0.0555556"), "{text}");
    assert!(text.contains("PASS"));
}

#[test]
fn output_file() {
    let path = temp_path("report.json");
    let out = run(&["spectrum", "osc8d", "--levels", "2", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(values(&r), vec![4.0, 6.0]);
}

#[test]
fn thread_cap() {
    let ok = bin().args(["verify", "duality"]).env("MONOPOLE_SPECTRA_THREADS", "1").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = bin().args(["verify", "duality"]).env("MONOPOLE_SPECTRA_THREADS", "0").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let strip = |v: &mut Value| v["command"]["timestamp"] = Value::Null;
    let (mut a, _) = json(&["verify", "duality"]);
    let mut b = {
        let out = bin().args(["verify", "duality", "--format", "json"]).env("MONOPOLE_SPECTRA_THREADS", "3").output().unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    strip(&mut a);
    strip(&mut b);
    assert_eq!(a, b);
}
