use std::process::{Command, Output};

use serde_json::Value;

fn rfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfl")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = rfl(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap_or(Value::Null))
}

#[test]
fn triangle_bounds() {
    let (code, v) = json(&["bounds", "--graph", "3;0-1,1-2,0-2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "rfl/1");
    let report = &v["payload"]["data"][0];
    let best = report["best_lower"].as_f64().unwrap();
    assert!((best - (1.0 - 1.0 / 7f64.sqrt())).abs() < 1e-12);
}

#[test]
fn named_graphs() {
    let (code, v) = json(&["bounds", "--graph", "K5", "--graph", "C7"]);
    assert_eq!(code, 0);
    let k5 = &v["payload"]["data"][0];
    assert_eq!(k5["upper_arg"], serde_json::json!({"num": 4, "den": 1}));
    assert!((k5["upper_interval"]["lower"].as_f64().unwrap() - 5.0 / 9.0).abs() < 1e-15);
    assert!((k5["upper_interval"]["upper"].as_f64().unwrap() - 0.625).abs() < 1e-15);
    assert!(!v["payload"]["data"][1]["exact"].is_null());
}

#[test]
fn hfunc_zero() {
    let (code, v) = json(&["hfunc", "--gamma", "0.5", "--g", "zero", "--horizon", "4096"]);
    assert_eq!(code, 0);
    for t in v["payload"]["data"]["trace"].as_array().unwrap() {
        assert_eq!(t["sup_ratio"].as_f64(), Some(4.0));
    }
    let out = rfl(&["hfunc", "--lambda", "3", "--g", "zero"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.666667") && text.contains("matches the closed-form"), "{text}");
}

#[test]
fn verify_exit_codes() {
    assert_eq!(rfl(&["verify", "constants"]).status.code(), Some(0));
    assert_eq!(rfl(&["verify", "k6"]).status.code(), Some(0));
    assert_eq!(rfl(&["verify", "bowcase", "--split-depth", "25"]).status.code(), Some(3));
    assert_eq!(rfl(&["verify", "lemmaik", "--exhaustive", "--n", "9"]).status.code(), Some(3));
    assert_eq!(rfl(&["bounds", "--graph", "7;0-9"]).status.code(), Some(4));
    assert_eq!(rfl(&["nonsense"]).status.code(), Some(4));
    assert_eq!(rfl(&["--help"]).status.code(), Some(0));
    assert_eq!(rfl(&["density", "--coloring", "/no/such/file"]).status.code(), Some(4));
}

#[test]
fn bowcase_payload_is_thread_independent() {
    let (c1, one) = json(&["verify", "bowcase", "--threads", "1"]);
    let (c8, eight) = json(&["verify", "bowcase", "--threads", "8"]);
    assert_eq!((c1, c8), (0, 0));
    assert_eq!(one["payload"], eight["payload"]);
    assert_eq!(one["payload"]["data"]["verdict"], "verified");
}

#[test]
fn density_from_file_and_generator() {
    let dir = std::env::temp_dir().join(format!("rfl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pentagon.txt");
    std::fs::write(&path, "n=5\n1001100101\n").unwrap();
    let (code, v) = json(&["density", "--coloring", path.to_str().unwrap(), "--lemma", "both"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["data"]["bes"]["triangles"], 0);
    let (code, v) = json(&["density", "--coloring", "random:20:7"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["data"]["final_lemma"]["rows"].as_array().unwrap().len(), 4);
    let out_path = dir.join("report.json");
    let out = rfl(&["density", "--coloring", "allred:12", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written["payload"]["kind"], "density");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn curve_csv() {
    let out = rfl(&["bounds", "--curve", "1:3:1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,f_lower,f_upper");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("3,0.5714285714285714,0.666666666666666"));
}
