use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ckrenorm"));
    c.env_remove("CKRENORM_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SCENARIO: &str = r#"{
  "space": "w^2",
  "functions": {
    "f": [{"from": "0", "value": 1.0}, {"from": "w+1", "value": -0.5}, {"from": "w*3+1", "value": 1.5}],
    "two_f": [{"from": "0", "value": 2.0}, {"from": "w+1", "value": -1.0}, {"from": "w*3+1", "value": 3.0}],
    "c": [{"from": "0", "value": 1.0}],
    "zero": [{"from": "0", "value": 0.0}]
  },
  "tasks": [
    {"kind": "rank", "point": "w*2"},
    {"kind": "derive", "point": "w*2", "alpha": "1"},
    {"kind": "vt", "point": "w*2"},
    {"kind": "hull", "set": "[0, 5] u {w^2}"},
    {"kind": "norm", "function": "f"},
    {"kind": "grad", "function": "f"},
    {"kind": "tal-support", "function": "c", "eps": 0.1},
    {"kind": "tal-witness", "function": "f"},
    {"kind": "reconstruct", "function": "f", "eps": 0.75}
  ]
}"#;

#[test]
fn exact_commands() {
    let o = run(&["rank", "w^2*3+w"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["hull", "[0, 5] u {w^2}"]);
    assert_eq!(stdout(&o).trim(), "{0, w^2}");
    let o = run(&["vt", "w^2*3+w"]);
    assert_eq!(stdout(&o).trim(), "(w^2*3, w^2*3 + w]");
    let o = run(&["vt", "0", "--space", "w"]);
    assert_eq!(stdout(&o).trim(), "{0}");
    let o = run(&["derive", "w*3", "--alpha", "1"]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = run(&["derive", "w*3", "--alpha", "2", "--json"]);
    assert_eq!(json(&o)["member"], Value::Bool(false));
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["rank", "w+"],
        vec!["hull", "[5, 0]"],
        vec!["derive", "w^2", "--alpha", "1", "--space", "w"],
        vec!["norm", "/nonexistent/scenario.json", "f"],
        vec!["check", "--suite", "nope"],
        vec!["check", "--suite", "hull", "--threads", "0"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let mut with_json = args.clone();
        with_json.push("--json");
        let o = run(&with_json);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let v = json(&o);
        assert_eq!(v["exit"], 2);
        assert_eq!(v["error"]["kind"], "input");
    }
}

#[test]
fn scenario_errors_name_the_problem() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"space": "w^2", "functions": {"g": [{"from": "0", "value": 1}, {"from": "w", "value": 2}]}}"#,
    );
    let o = run(&["norm", s(&bad), "g"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("\"g\"") && err.contains("piece 1") && err.contains("limit point w"), "{err}");

    let good = write(&dir, "s.json", SCENARIO);
    let o = run(&["norm", s(&good), "h"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn computations_on_a_scenario() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "s.json", SCENARIO);
    let nf: f64 = stdout(&run(&["norm", s(&p), "f"])).trim().parse().unwrap();
    let n2f: f64 = stdout(&run(&["norm", s(&p), "two_f"])).trim().parse().unwrap();
    assert!((n2f - 2.0 * nf).abs() < 1e-9);
    assert!((1.5..=1.5 / 0.9).contains(&nf));

    let g = json(&run(&["grad", s(&p), "f", "--json"]));
    assert_eq!(g["pieces"].as_array().unwrap().len(), 3);

    let sup = json(&run(&["tal-support", s(&p), "c", "--eps", "0.1", "--json"]));
    let entries = sup["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert_eq!(entries[0]["triple"], "(1/4, 1/2, 3/4)");
    assert_eq!(entries[0]["value"], 0.5);

    let w = json(&run(&["tal-witness", s(&p), "f", "--json"]));
    assert_eq!(w["f_s"].as_f64().unwrap().abs(), 1.5);

    let r = run(&["reconstruct", s(&p), "f", "--eps", "0.75", "--json"]);
    assert!(r.status.success());
    assert_eq!(json(&r)["ok"], Value::Bool(true));
}

#[test]
fn failed_computation_exits_1() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "s.json", SCENARIO);
    let o = run(&["tal-witness", s(&p), "zero"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["tal-witness", s(&p), "zero", "--json"]);
    assert_eq!(json(&o)["error"]["kind"], "verification");
}

#[test]
fn run_executes_every_task() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "s.json", SCENARIO);
    let o = run(&["run", s(&p), "--json"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v = json(&o);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 9);
    assert!(results.iter().all(|r| r["ok"] == Value::Bool(true)));
    assert_eq!(results[0]["result"]["rank"], "1");
    assert_eq!(results[3]["result"]["hull"], serde_json::json!(["0", "w^2"]));
}

#[test]
fn config_layers() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "s.json", SCENARIO);
    let cfg = write(&dir, "cfg.json", r#"{"a": 0.99}"#);
    let base: f64 = stdout(&run(&["norm", s(&p), "c"])).trim().parse().unwrap();
    let o = bin().args(["norm", s(&p), "c", "--json"]).env("CKRENORM_CONFIG", &cfg).output().unwrap();
    let v = json(&o);
    assert_eq!(v["config"]["a"], 0.99);
    assert!(v["norm"].as_f64().unwrap() < base);

    let overridden = write(&dir, "o.json", &SCENARIO.replacen("\"space\"", "\"config\": {\"a\": 0.5}, \"space\"", 1));
    let o = bin().args(["norm", s(&overridden), "c", "--json"]).env("CKRENORM_CONFIG", &cfg).output().unwrap();
    assert_eq!(json(&o)["config"]["a"], 0.5);

    let broken = write(&dir, "broken.json", r#"{"a": 2.0}"#);
    let o = bin().args(["norm", s(&p), "c"]).env("CKRENORM_CONFIG", &broken).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_passes_and_is_deterministic() {
    let o = run(&["check", "--suite", "orlicz-equivalence", "--seed", "7", "--cases", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let args = ["check", "--suite", "hull", "--seed", "3", "--cases", "100", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut serial = args.to_vec();
    serial.extend(["--threads", "1"]);
    assert_eq!(run(&serial).stdout, a.stdout);

    let v = json(&a);
    assert_eq!(v["ok"], Value::Bool(true));
    let report = &v["suites"][0];
    assert_eq!(report["suite"], "hull");
    assert_eq!(report["seed"], 3);
    assert_eq!(report["cases"], 100);
    assert_eq!(report["results"].as_array().unwrap().len(), 100);
    assert!(report["config"]["a"].is_number());
}

#[test]
fn suites_are_listed() {
    let v = json(&run(&["suites", "--json"]));
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    for want in ["orlicz-equivalence", "hull", "talagrand-c0", "reconstruction"] {
        assert!(names.contains(&want), "{want}");
    }
}
