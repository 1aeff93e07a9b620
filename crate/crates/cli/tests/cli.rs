use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn germcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json report")
}

const F1: &str = r#"{"vars":["x","y"],"trunc":3,"terms":[
  {"exp":[3,0],"re":"1"},{"exp":[2,1],"re":"2"},{"exp":[1,2],"re":"1"},
  {"exp":[2,0],"re":"-1"},{"exp":[1,1],"re":"-2"},{"exp":[0,2],"re":"-1"}]}"#;
const F2: &str = r#"{"vars":["x","y"],"trunc":3,"terms":[
  {"exp":[1,0],"re":"1"},{"exp":[0,1],"re":"1"},{"exp":[1,1],"re":"-3"},{"exp":[0,2],"re":"-3"}]}"#;

#[test]
fn coprime_reports_the_rank_table() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (
        write(dir.path(), "f1.json", F1),
        write(dir.path(), "f2.json", F2),
    );
    let v = json_of(&germcalc(&[
        "coprime",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--dmax",
        "2",
    ]));
    let ranks = v["result"]["verdict"]["ranks"].as_array().unwrap();
    let d2 = ranks.iter().find(|r| r["d"] == 2).unwrap();
    assert_eq!(d2["rank"], 6);
    assert_eq!(d2["bound"], 6);
    assert_eq!(v["result"]["verdict"]["status"], "composite-consistent");
    assert_eq!(v["config"]["command"]["coprime"]["dmax"], 2);
}

#[test]
fn euler_flow_is_the_exponential() {
    let dir = TempDir::new().unwrap();
    let x = write(
        dir.path(),
        "euler.json",
        r#"[{"vars":["z"],"trunc":4,"terms":[{"exp":[1],"re":"1"}]}]"#,
    );
    let v = json_of(&germcalc(&["flow", x.to_str().unwrap(), "--order", "4"]));
    let phi = &v["result"]["phi0"];
    assert_eq!(phi["vars"], serde_json::json!(["z", "t"]));
    let terms: Vec<(Value, Value)> = phi["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["exp"].clone(), t["re"].clone()))
        .collect();
    let expect = [
        ([1, 0], "1"),
        ([1, 1], "1"),
        ([1, 2], "1/2"),
        ([1, 3], "1/6"),
    ];
    assert_eq!(terms.len(), expect.len());
    for ((e, c), (we, wc)) in terms.iter().zip(expect) {
        assert_eq!(*e, serde_json::json!(we));
        assert_eq!(*c, Value::from(wc));
    }
}

#[test]
fn missing_file_exits_2_and_names_it() {
    let out = germcalc(&["norm", "--input", "/nonexistent/f.json", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/f.json"));
}

#[test]
fn output_is_deterministic_and_honours_out() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"vars":["z"],"trunc":5,"terms":[{"exp":[1],"re":"1"},{"exp":[2],"re":"1/3","im":"2"}]}"#,
    );
    let out = dir.path().join("r.json");
    let args = [
        "--mode",
        "approx",
        "norm",
        "--input",
        f.to_str().unwrap(),
        "--alpha",
        "0.5",
    ];
    let first = germcalc(&args);
    let second = germcalc(&args);
    assert_eq!(first.stdout, second.stdout);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    assert!(germcalc(&with_out).status.success());
    let written = fs::read(&out).unwrap();
    let strip = |b: &[u8]| {
        let mut v: Value = serde_json::from_slice(b).unwrap();
        v["config"]["out"] = Value::Null;
        v
    };
    assert_eq!(strip(&written), strip(&first.stdout));
}

const P: &str = r#"{"vars":["x","y"],"trunc":6,"terms":[{"exp":[2,0],"re":"6"},{"exp":[1,1],"re":"-11"},{"exp":[0,2],"re":"6"}]}"#;
const Q: &str = r#"{"vars":["x","y"],"trunc":6,"terms":[{"exp":[0,2],"re":"1"}]}"#;

#[test]
fn holonomy_rejects_exact_mode() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (
        write(dir.path(), "p.json", P),
        write(dir.path(), "q.json", Q),
    );
    let (p, q) = (p.to_str().unwrap(), q.to_str().unwrap());
    let out = germcalc(&["--mode", "exact", "foliation", p, q, "--holonomy"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&germcalc(&[
        "foliation",
        p,
        q,
        "--holonomy",
        "--loop",
        "around:0",
    ]));
    let m = &v["result"]["multiplier"];
    assert!((m["re"].as_f64().unwrap() + 1.0).abs() < 1e-6);
}

#[test]
fn foliation_check_reports_the_cubic() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (
        write(dir.path(), "p.json", P),
        write(dir.path(), "q.json", Q),
    );
    let v = json_of(&germcalc(&[
        "foliation",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        "--check",
    ]));
    assert_eq!(v["result"]["discriminant"]["re"], "4");
    assert_eq!(v["result"]["rnd_star"]["member"], true);
}

#[test]
fn numeric_failures_exit_3() {
    let dir = TempDir::new().unwrap();
    let (p, q) = (
        write(dir.path(), "p.json", P),
        write(dir.path(), "q.json", Q),
    );
    // A tolerance too tight for the step-size floor makes the integrator give up.
    let out = germcalc(&[
        "foliation",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
        "--holonomy",
        "--loop",
        "around:2",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn exact_inversion_round_trips_through_json() {
    let dir = TempDir::new().unwrap();
    let d = write(
        dir.path(),
        "d.json",
        r#"{"vars":["z"],"trunc":4,"terms":[{"exp":[1],"re":"1"},{"exp":[2],"re":"1"}]}"#,
    );
    let v = json_of(&germcalc(&["invert", d.to_str().unwrap()]));
    let coeffs: Vec<&str> = v["result"]["inverse"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["re"].as_str().unwrap())
        .collect();
    // Catalan numbers with alternating signs.
    assert_eq!(coeffs, ["1", "-1", "2", "-5"]);
}
