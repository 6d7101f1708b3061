//! End-to-end checks of the command-line surface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quasiline")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env("QUASILINE_OUT", dir)
        .output()
        .expect("spawn quasiline")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quasiline-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn cutpoly_of_k2_prints_the_coefficients() {
    let dir = tempdir("cutpoly");
    let gen = run_in(&dir, &["gen", "named", "--name", "complete:2"]);
    assert!(gen.status.success(), "{gen:?}");
    let out = run_in(&dir, &["cutpoly", "--graph", "complete_2.json"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[2,2]");
    let artifact = read_json(&dir.join("cutpoly.json"));
    assert_eq!(artifact["result"]["coefficients"][0], "2");
    assert_eq!(artifact["command"], "cutpoly");
    assert!(artifact["input_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn build_gstar_j_kind_has_24_vertices() {
    let dir = tempdir("gstar");
    assert!(run_in(&dir, &["gen", "named", "--name", "k4"]).status.success());
    let out = run_in(
        &dir,
        &[
            "build-gstar",
            "--base",
            "k4.json",
            "--kind",
            "j",
            "--out-file",
            dir.join("gdag.json").to_str().unwrap(),
        ],
    );
    assert!(out.status.success(), "{out:?}");
    let doc = read_json(&dir.join("gdag.json"));
    assert_eq!(doc["n"], 24);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 42);
    assert_eq!(doc["layout"]["kind"], "J");
    assert!(doc["krausz"].is_null());

    // H kind carries its canonical cover, and the document doubles as a
    // plain graph file for the other commands
    let out = run_in(&dir, &["build-gstar", "--base", "k4.json", "--kind", "h"]);
    assert!(out.status.success());
    let doc = read_json(&dir.join("gstar_h.json"));
    assert_eq!(doc["n"], 36);
    assert!(doc["krausz"].is_array());
    let out = run_in(&dir, &["check-class", "--graph", "gstar_h.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("quasi-line: true"));
}

#[test]
fn audit_gadget_reports_the_audit_table() {
    let dir = tempdir("audit");
    let out = run_in(&dir, &["audit-gadget", "--kind", "h"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("max internal cut 18 attained by 2, runner-up 17"));
    let artifact = read_json(&dir.join("audit_gadget_h.json"));
    assert_eq!(artifact["result"]["max_cut"], 18);
    assert_eq!(artifact["result"]["second_best"], 17);
}

#[test]
fn cap_errors_exit_with_code_two() {
    let dir = tempdir("cap");
    assert!(run_in(&dir, &["gen", "cubic", "--n", "30", "--seed", "1"])
        .status
        .success());
    let out = run_in(&dir, &["cutpoly", "--graph", "cubic_n30_seed1.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("enumeration cap"), "{err}");

    // unknown flags are a usage error (clap exits 2 with usage text)
    let out = run_in(&dir, &["cutpoly", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    // odd cubic order is a generator precondition
    let out = run_in(&dir, &["gen", "cubic", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn artifacts_are_reproducible_modulo_timestamp() {
    let dir = tempdir("repro");
    assert!(run_in(&dir, &["gen", "named", "--name", "petersen"]).status.success());
    let run = || {
        assert!(run_in(
            &dir,
            &["maxcut", "--graph", "petersen.json", "--method", "local-search", "--seed", "9"]
        )
        .status
        .success());
        let mut v = read_json(&dir.join("maxcut.json"));
        v.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&v).unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first, second);
}

#[test]
fn generated_graphs_roundtrip_through_the_schema() {
    let dir = tempdir("roundtrip");
    assert!(run_in(
        &dir,
        &["gen", "bipartite-cubic", "--n-per-side", "4", "--seed", "7"]
    )
    .status
    .success());
    let doc = read_json(&dir.join("bipartite_cubic_s4_seed7.json"));
    assert_eq!(doc["n"], 8);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 12);
    assert_eq!(doc["bipartition"].as_array().unwrap().len(), 2);
    // extra generator metadata must not break consumers
    let out = run_in(
        &dir,
        &["check-class", "--graph", "bipartite_cubic_s4_seed7.json"],
    );
    assert!(out.status.success());
}

#[test]
fn zsigma_and_sandwich_agree_on_k4() {
    let dir = tempdir("zsigma");
    assert!(run_in(&dir, &["gen", "named", "--name", "k4"]).status.success());
    let out = run_in(
        &dir,
        &["zsigma", "--base", "k4.json", "--sigma", "++--", "--mu", "2^76"],
    );
    assert!(out.status.success(), "{out:?}");
    let artifact = read_json(&dir.join("zsigma.json"));
    // degree 18*4 + 4 = 76, mass 2^32
    assert_eq!(artifact["result"]["degree"], 76);
    assert_eq!(artifact["result"]["mass"], "4294967296");

    let out = run_in(&dir, &["sandwich", "--base", "k4.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("16/16"));
}

#[test]
fn escape_writes_csv_rows() {
    let dir = tempdir("escape");
    std::fs::write(
        dir.join("exp.json"),
        r#"{"sizes": [3], "mu": "16", "replicates": 2, "step_cap": 5000000, "seed": 7}"#,
    )
    .unwrap();
    let out = run_in(&dir, &["escape", "--config", "exp.json"]);
    assert!(out.status.success(), "{out:?}");
    let csv = std::fs::read_to_string(dir.join("escape.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("size,replicate,hit_time,censored"));
    assert_eq!(csv.lines().count(), 3);
    assert!(dir.join("escape_control.csv").exists());
    let meta = read_json(&dir.join("escape_meta.json"));
    assert_eq!(meta["config"]["replicates"], 2);
    assert_eq!(meta["config"]["mu"], "16");
}
