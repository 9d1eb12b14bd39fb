use std::process::Command;

use polarized::cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("polarized").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn commute_reports_the_composite() {
    let v = call_json(&["commute", "--catalog", "phi_1+i", "phi_1-i"]);
    assert_eq!(v["commute"], true);
    assert_eq!(v["composition_equals"], "phi_2@E1");
}

#[test]
fn height_of_two_under_squaring() {
    let v = call_json(&["height", "--catalog", "pow_2", "--point", "2,1"]);
    let value = v["value"].as_f64().unwrap();
    assert!((value - 2f64.ln()).abs() <= 1e-9, "{value}");
    for key in ["point", "map", "value", "error_bound", "iterations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn height_batch_as_csv() {
    let (code, out, _) = call(&["height", "--catalog", "phi_1+i", "--point", "2,1", "--point", "1+w,3", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("point,map,value,error_bound,iterations"));
}

#[test]
fn table_check_row_for_one_plus_two_i() {
    let v = call_json(&["table-check", "--lambda", "1,2,1"]);
    let row = &v["rows"][0];
    assert_eq!(row["computed"], serde_json::json!([3, 3, 3, 3]));
    assert_eq!(row["computed"], row["predicted"]);
    assert_eq!(v["all_match"], true);
}

#[test]
fn table_check_reports_rows_without_a_prediction() {
    let (code, out, err) = call(&["table-check", "--lambda", "0,1,3", "--lambda", "3,0,3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][0]["match"], true);
    assert_eq!(code, if v["all_match"] == true { EXIT_OK } else { EXIT_DOMAIN }, "{err}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["height", "--catalog", "pow_2"]).0, EXIT_USAGE);
    assert_eq!(call(&["height", "--catalog", "no_such_map", "--point", "1"]).0, EXIT_USAGE);
    assert_eq!(call(&["measure", "--catalog", "pow_2", "--window", "1,0,0,1"]).0, EXIT_USAGE);
    assert_eq!(call(&["commute", "--catalog", "phi_1+i"]).0, EXIT_USAGE);
}

#[test]
fn unparseable_map_file_is_a_usage_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"field": {"d": 1}, "num": ["1", "0", "1"], "den": ["0", "2*v"]}"#).unwrap();
    let (code, _, err) = call(&["periodic", "--map", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("den[1]") && err.contains("position 2"), "{err}");
}

#[test]
fn domain_errors_exit_with_one() {
    let (code, _, err) = call(&["periodic", "--catalog", "phi_2@E1", "--period", "4"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(!err.is_empty());
    let (code, _, _) = call(&["ramify", "--lambda", "1,1,3"]);
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn map_files_round_trip_through_compose() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("double.json");
    let v = call_json(&["compose", "--catalog", "phi_1+i", "phi_1-i", "--out", path.to_str().unwrap()]);
    assert_eq!(v["equals"], "phi_2@E1");
    let v = call_json(&["commute", "--map", path.to_str().unwrap(), "--catalog", "phi_1+i"]);
    assert_eq!(v["commute"], true);
}

#[test]
fn ramify_prints_computed_and_predicted() {
    let v = call_json(&["ramify", "--lambda", "1,1,1"]);
    assert_eq!(v["map"], "phi_1+i");
    assert_eq!(v["multisets_agree"], true);
    assert_eq!(v["lattes"], true);
    assert_eq!(v["targets"].as_array().unwrap().len(), 4);
}

#[test]
fn catalog_lists_degrees_and_fields() {
    let v = call_json(&["catalog"]);
    let maps = v["maps"].as_array().unwrap();
    let q = maps.iter().find(|m| m["name"] == "phi_sqrt-3").unwrap();
    assert_eq!(q["degree"], 3);
    assert_eq!(q["field"], 3);
    let v = call_json(&["catalog", "--double", "E1"]);
    assert_eq!(v["equals"], "phi_2@E1");
}

#[test]
fn arith_gcd_and_norm() {
    assert_eq!(call_json(&["arith", "gcd", "4+2*w", "6"])["result"], "2");
    assert_eq!(call_json(&["arith", "--field", "3", "norm", "1+w"])["result"], "4");
    assert_eq!(call_json(&["arith", "poly-gcd", "-1,0,1", "1,1"])["result"], serde_json::json!(["1", "1"]));
}

#[test]
fn periodic_points_of_squaring() {
    let v = call_json(&["periodic", "--catalog", "pow_2", "--period", "2"]);
    assert_eq!(v["count"], 5);
    for p in v["points"].as_array().unwrap() {
        if p["repelling"] == true {
            let z = p["z"].as_array().unwrap();
            let r = z[0].as_f64().unwrap().hypot(z[1].as_f64().unwrap());
            assert!((r - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let img = dir.path().join(format!("j{k}.pgm"));
        let csv = dir.path().join(format!("h{k}.csv"));
        let (_, a, _) = call(&["density-compare", "--catalog", "pow_2", "--depth", "8", "--seed", "7", "--res", "32", "--out", csv.to_str().unwrap()]);
        let (_, b, _) = call(&["julia", "--catalog", "phi_1+i", "--res", "48", "--out", img.to_str().unwrap()]);
        let (_, c, _) = call(&["height", "--catalog", "phi_1-i", "--point", "3,2", "--point", "w,5", "--format", "csv"]);
        let a = a.replace(&format!("h{k}.csv"), "h.csv");
        let b = b.replace(&format!("j{k}.pgm"), "j.pgm");
        outputs.push((a, b, c, std::fs::read(&img).unwrap(), std::fs::read(&csv).unwrap()));
    }
    assert!(outputs[0] == outputs[1]);
    let raster = &outputs[0].3;
    assert!(raster.starts_with(b"P5\n# map phi_1+i\n"));
}

#[test]
fn the_binary_uses_the_same_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_polarized");
    let ok = Command::new(exe).args(["commute", "--catalog", "phi_1+i", "phi_1-i"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["composition_equals"], "phi_2@E1");
    let bad = Command::new(exe).args(["height", "--tol"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
