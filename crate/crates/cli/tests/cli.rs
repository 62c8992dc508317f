use std::path::{Path, PathBuf};
use std::process::Command;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../worked-examples")
}

fn sdw(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sdw")).args(args).current_dir(examples()).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn documented_exit_codes() {
    assert_eq!(sdw(&["sdp", "fleischer", "fiber_z4.json"]).0, 0);
    let (code, out, _) = sdw(&["free", "lattice-leq", "x \\/ (y /\\ z)", "x"]);
    assert_eq!(code, 1);
    assert!(out.contains("trace"));
    assert_eq!(sdw(&["free", "monoid-relate", "sigma.txt", "x", "y", "--max-len", "12"]).0, 2);
}

#[test]
fn malformed_input_exits_3_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"name\": \"A\",\n \"size\": 2,\n \"signature\": [{\"name\": \"f\", \"arity\": 1}],\n \"tables\": {\"f\": [0, 5]}}").unwrap();
    let (code, _, err) = sdw(&["alg", "show", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("bad.json"), "{err}");
    assert_eq!(sdw(&["comm", "nonsense"]).0, 3);
    assert_eq!(sdw(&["comm", "compute", "s3", "--congs", "[[0,1],[2],[3],[4],[5]]"]).0, 3);
}

#[test]
fn reports_are_deterministic_and_echo_caps() {
    let args = ["--json", "comm", "properties", "d4", "--max-k", "2"];
    let (c1, a, _) = sdw(&args);
    let (c2, b, _) = sdw(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["caps"]["max_cube_functions"], 1_000_000);
    assert!(v.get("timing_ms").is_none());
    let (_, timed, _) = sdw(&["--json", "--timing", "alg", "show", "s3"]);
    assert!(timed.contains("timing_ms"));
}

#[test]
fn carrier_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sdw"))
        .args(["--json", "sdp", "check", "z4_cubed_mod2.json"])
        .env("SDW_MAX_CARRIER", "10")
        .current_dir(examples())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"max_carrier\": 10"));
}

#[test]
fn shipped_corpus_passes() {
    let (code, out, err) = sdw(&["corpus", ".", "--workers", "2"]);
    assert_eq!(code, 0, "{out}{err}");
}

#[test]
fn empty_corpus_passes_and_wrong_expectation_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    assert_eq!(sdw(&["corpus", path]).0, 0);
    let spec = r#"{"name": "deliberately_wrong", "command": ["malcev", "l2"], "expect": {"exit": 0}}"#;
    std::fs::write(dir.path().join("wrong.spec.json"), spec).unwrap();
    let (code, out, _) = sdw(&["corpus", path]);
    assert_eq!(code, 1);
    assert!(out.contains("deliberately_wrong"));
    std::fs::write(dir.path().join("missing.spec.json"), r#"{"name": "m", "command": ["alg", "show", "a.json"], "inputs": ["a.json"], "expect": {"exit": 0}}"#).unwrap();
    assert_eq!(sdw(&["corpus", path]).0, 3);
}

#[test]
fn in_process_run_matches_binary() {
    let out = sdw_cli::run(["sdw", "--json", "comm", "compute", "s3", "--congs", "1", "1"]);
    assert_eq!(out.code, 0);
    let report = out.report.unwrap();
    assert_eq!(report.result["gamma"], serde_json::json!([[0, 3, 4], [1, 2, 5]]));
    assert_eq!(sdw_cli::run(["sdw", "--help"]).code, 0);
}
