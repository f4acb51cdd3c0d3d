use invrod_core::export::{parse_obj, ENERGIES_HEADER};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn invrod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invrod")).args(args).output().unwrap()
}

fn config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.json");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|_| panic!("not JSON: {text}"))
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn inverse_writes_frames_and_energies() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), r#"{"version": 1, "scenario": "spherical", "nodes": 60}"#);
    let out = tmp.path().join("inv");
    let o = invrod(&["inverse", "--config", &cfg, "--out", out.to_str().unwrap(), "--export-every", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let energies = std::fs::read_to_string(out.join("energies.csv")).unwrap();
    let mut lines = energies.lines();
    assert_eq!(lines.next(), Some(ENERGIES_HEADER));
    let rows = lines.count();
    assert!(rows > 0);

    let mut frames: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".obj"))
        .collect();
    frames.sort();
    assert_eq!(frames.first().map(String::as_str), Some("frame_000000.obj"));
    assert_eq!(frames.last().unwrap(), &format!("frame_{rows:06}.obj"));
    assert!(frames.contains(&"frame_000007.obj".to_string()));
    for f in &frames {
        let (v, l) = parse_obj(&std::fs::read_to_string(out.join(f)).unwrap()).unwrap();
        assert_eq!(v.len(), 60);
        assert_eq!(l.len(), 1);
    }
    assert_eq!(summary(&out)["report"]["termination"], "converged");
}

#[test]
fn forward_from_target_as_rest_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), r#"{"version": 1, "scenario": "conical", "nodes": 60}"#);
    let out = tmp.path().join("fwd");
    let o = invrod(&["forward", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["mode"], "forward");
    assert!(s["report"]["energy"]["total"].as_f64().unwrap() > 0.0);
    assert!(out.join("frame_000000.obj").exists());
}

#[test]
fn roundtrip_recovers_the_target() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), r#"{"version": 1, "scenario": "spherical", "nodes": 80}"#);
    let out = tmp.path().join("rt");
    let o = invrod(&["roundtrip", "--config", &cfg, "--out", out.to_str().unwrap(), "--export-every", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("roundtrip.csv")).unwrap();
    let rms: f64 = csv.lines().last().unwrap().strip_prefix("rms,").unwrap().parse().unwrap();
    let s = summary(&out);
    assert!(rms < s["tolerance"].as_f64().unwrap());
    assert!(out.join("inverse/energies.csv").exists());
    assert!(out.join("forward/frame_000000.obj").exists());
}

#[test]
fn existence_failure_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), r#"{"version": 1, "scenario": "cantilever", "cantilever": {"gamma": 12.0}}"#);
    let out = tmp.path().join("c12");
    let o = invrod(&["inverse", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "diverged");
    assert!(summary(&out)["report"]["termination"]["diverged"].is_string());
}

#[test]
fn oracle_writes_angle_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("oracle");
    let o = invrod(&["oracle", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("oracle.csv")).unwrap();
    assert!(csv.starts_with("s,simulated,oracle,abs_error\n"));
    assert!(summary(&out)["relative_angle_error"].as_f64().unwrap() < 0.01);
}

#[test]
fn configuration_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"version": 1, "scenario": "spherical", "tolerance": 3}"#,
        r#"{"version": 2, "scenario": "spherical"}"#,
        r#"{"version": 1, "scenario": "torus"}"#,
        r#"{"version": 1, "scenario": "spherical", "solver": {"dt": -1.0}}"#,
        "not json",
    ];
    for text in cases {
        let cfg = config(tmp.path(), text);
        let o = invrod(&["inverse", "--config", &cfg, "--out", tmp.path().join("x").to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert_eq!(stderr_json(&o)["error"], "config", "{text}");
    }
    let o = invrod(&["inverse", "--scenario", "spherical", "--export-every", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let o = invrod(&["inverse", "--config", "/nonexistent/run.json"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"], "io");
}
