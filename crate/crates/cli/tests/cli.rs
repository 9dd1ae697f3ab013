use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn topoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topoff")).args(args).env_remove("TOPOFF_CONFIG_DIR").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn configs() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").display().to_string()
}

#[test]
fn budget_reproduces_the_damping_factor() {
    let v = json(&topoff(&["budget", "--n2q", "40", "--n1q", "484", "--depth", "6", "--qubits", "20", "--spam-events", "24"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "budget");
    let b = v["result"]["budget"].as_f64().unwrap();
    assert!((b - 0.762).abs() < 1e-3, "{b}");
}

#[test]
fn budget_falls_back_to_the_compiled_plan() {
    let v = json(&topoff(&["budget", "--strategy", "hardware"]));
    assert_eq!(v["result"]["n_2q"], 40);
    assert_eq!(v["result"]["qubits"], 20);
}

#[test]
fn one_noiseless_shot_has_unit_energy() {
    let v = json(&topoff(&["prepare", "--noise", "none", "--shots", "1", "--seed", "3"]));
    assert_eq!(v["result"]["energy_density"]["mean"].as_f64(), Some(-1.0));
    assert!(v["created_unix"].is_u64());
}

#[test]
fn canonical_reports_are_byte_identical_across_thread_counts() {
    let run = |threads: &str| {
        let out = topoff(&[
            "prepare", "--noise", "h1-1", "--seed", "7", "--shots", "300", "--canonical", "--threads", threads,
        ]);
        assert!(out.status.success());
        out.stdout
    };
    let a = run("1");
    assert_eq!(a, run("4"));
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert!(v.get("created_unix").is_none());
    assert!(v["result"]["meta"].get("created_unix").is_none());
}

#[test]
fn noise_files_resolve_through_the_config_dir() {
    let out = Command::new(env!("CARGO_BIN_EXE_topoff"))
        .args(["prepare", "--noise", "h1-1.json", "--seed", "7", "--shots", "40", "--canonical"])
        .env("TOPOFF_CONFIG_DIR", configs())
        .output()
        .unwrap();
    let from_file = json(&out);
    let builtin = json(&topoff(&["prepare", "--noise", "h1-1", "--seed", "7", "--shots", "40", "--canonical"]));
    assert_eq!(from_file["result"], builtin["result"]);
}

#[test]
fn exit_codes() {
    assert_eq!(topoff(&["prepare", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(topoff(&["frobnicate"]).status.code(), Some(2));
    // seed is mandatory
    assert_eq!(topoff(&["prepare", "--shots", "1"]).status.code(), Some(2));
    assert_eq!(topoff(&["prepare", "--seed", "1", "--noise", "missing.json"]).status.code(), Some(2));
    assert_eq!(topoff(&["prepare", "--seed", "1", "--strategy", "greedy"]).status.code(), Some(2));
    // the torus has too few free ancillas for the QND script
    assert_eq!(topoff(&["qnd", "--lattice", "torus4x4", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(topoff(&["--help"]).status.code(), Some(0));
    // unwritable output is a runtime failure
    let out = topoff(&["prepare", "--seed", "1", "--shots", "1", "--out", "/nonexistent/dir/r.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn records_feed_mitigation() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("shots.ndjson");
    let rec = rec.to_str().unwrap();
    json(&topoff(&["prepare", "--noise", "h1-1", "--seed", "2", "--shots", "400", "--records", rec]));
    assert_eq!(std::fs::read_to_string(rec).unwrap().lines().count(), 400);
    let v = json(&topoff(&["mitigate", "--noise", "h1-1", "--seed", "2", "--records", rec]));
    let raw = v["result"]["raw"]["energy_density"]["mean"].as_f64().unwrap();
    let mit = v["result"]["mitigated"]["energy_density"]["mean"].as_f64().unwrap();
    assert!(mit < raw);
}

#[test]
fn entropy_dataset_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.ndjson");
    let data = data.to_str().unwrap();
    let common = ["--seed", "5", "--settings", "6", "--shots-per-setting", "16", "--bootstrap", "100", "--canonical"];
    let mut args = vec!["entropy", "--dataset", data];
    args.extend(common);
    let simulated = json(&topoff(&args));
    let mut args = vec!["entropy", "--input", data];
    args.extend(common);
    let reread = json(&topoff(&args));
    assert_eq!(simulated["result"]["shapes"], reread["result"]["shapes"]);
    assert_eq!(reread["result"]["n_settings"], 6);
}

#[test]
fn sweep_writes_one_csv_row_per_value() {
    let out = topoff(&["sweep", "--field", "p2", "--values", "0.001,0.004", "--seed", "1", "--shots", "100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().get(2), Some("energy_density"));
    assert_eq!(rows.records().count(), 2);
    assert_eq!(topoff(&["sweep", "--field", "p9", "--values", "0.1", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn noiseless_braid_phases() {
    let v = json(&topoff(&["braid", "--seed", "1", "--shots", "50"]));
    let runs = v["result"]["runs"].as_array().unwrap();
    assert_eq!(runs[0]["ancilla_z"]["mean"].as_f64(), Some(-1.0));
    assert_eq!(runs[1]["ancilla_z"]["mean"].as_f64(), Some(1.0));
}

#[test]
fn qnd_trace_lines_match_the_shot_count() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.ndjson");
    let v = json(&topoff(&["qnd", "--seed", "1", "--shots", "30", "--trace", trace.to_str().unwrap()]));
    assert!(v["result"].get("records").is_none());
    assert_eq!(std::fs::read_to_string(&trace).unwrap().lines().count(), 30);
}

#[test]
fn emitted_circuit_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prep.txt");
    json(&topoff(&["prepare", "--seed", "1", "--shots", "1", "--strategy", "hardware", "--emit-circuit", path.to_str().unwrap()]));
    let c = topoff_core::circuit::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(c.count_two_qubit(), 40);
}
