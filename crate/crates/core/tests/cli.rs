use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dmt_core::fixtures;
use dmt_core::io::emit_scx;
use serde_json::Value;
use tempfile::TempDir;

fn dmt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmt")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p3_file(dir: &TempDir) -> String {
    write(dir.path(), "p3.scx", &emit_scx(&fixtures::p3())).display().to_string()
}

#[test]
fn critical_on_p3() {
    let dir = TempDir::new().unwrap();
    let p = p3_file(&dir);
    let out = dmt(&["critical", "--in", &p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["counts"], serde_json::json!([2, 1]));
    assert_eq!(v["critical"], serde_json::json!([[1], [3], [2, 3]]));
}

#[test]
fn mountain_pass_on_p3() {
    let dir = TempDir::new().unwrap();
    let p = p3_file(&dir);
    let out = dmt(&["mountain-pass", "--in", &p, "--min0", "1", "--min1", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["c"], 4);
    assert_eq!(v["edge"], serde_json::json!([2, 3]));
}

#[test]
fn every_command_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = p3_file(&dir);
    let runs: [&[&str]; 11] = [
        &["validate", "--in", &p],
        &["critical", "--in", &p],
        &["gradient", "--in", &p],
        &["flow", "--in", &p],
        &["levels", "--in", &p],
        &["collapse", "--in", &p, "--level", "3"],
        &["homology", "--in", &p],
        &["mountain-pass", "--in", &p, "--min0", "1", "--min1", "3"],
        &["lscat", "--in", &p],
        &["minmax-check", "--in", &p],
        &["export-dot", "--in", &p],
    ];
    for args in runs {
        let a = dmt(args);
        let b = dmt(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn random_is_reproducible_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = dmt(&["random", "--seed", "17", "--vertices", "7", "--dim", "2"]);
    let b = dmt(&["random", "--seed", "17", "--vertices", "7", "--dim", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let p = write(dir.path(), "r.scx", std::str::from_utf8(&a.stdout).unwrap());
    let out = dmt(&["validate", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn off_input() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "tet.off", "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n");
    let out = dmt(&["homology", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["euler"], 2);
}

#[test]
fn dot_output() {
    let dir = TempDir::new().unwrap();
    let p = p3_file(&dir);
    let out = dmt(&["critical", "--in", &p, "--dot"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn domain_errors_exit_one_with_json() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.scx", "0 : 1\n1 : 2\n0 1 : 0.5\n");
    let out = dmt(&["critical", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["error"]["kind"].is_string());

    let out = dmt(&["critical", "--in", dir.path().join("missing.scx").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "IoError");

    let p = p3_file(&dir);
    let out = dmt(&["mountain-pass", "--in", &p, "--min0", "0", "--min1", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dmt(&[]).status.code(), Some(2));
    assert_eq!(dmt(&["critical"]).status.code(), Some(2));
    assert_eq!(dmt(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(dmt(&["--help"]).status.code(), Some(0));
}
