//! The `liftsampler` binary as a process: exit codes, file layout,
//! determinism and config round-trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liftsampler"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn small_config(out: &Path, instance: &str, seed: u64) -> String {
    format!(
        r#"{{"instance": "{instance}", "sampler": {{"iterations": 100, "burn_in": 10, "seed": {seed}}}, "out_dir": {:?}}}"#,
        out
    )
}

#[test]
fn run_writes_samples_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write(dir.path(), "c.json", &small_config(&out, "P2_d2", 1));
    let o = run(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("samples.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "step,x1,x2,lift1,lift2");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 90);
    assert!(rows.iter().all(|r| r.split(',').count() == 5));
    assert!(rows[0].starts_with("11,"));
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["accepted"], 100);
    assert!(stats["mean_proposals"].as_f64().unwrap() >= 1.0);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("out{k}"));
        let cfg = write(dir.path(), &format!("c{k}.json"), &small_config(&out, "C1_d2", 17));
        assert_eq!(run(&["run", "--config", &cfg]).status.code(), Some(0));
        files.push(fs::read(out.join("samples.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let cfg = write(dir.path(), "c.json", &small_config(&out_a, "C1_d1", 1));
    assert_eq!(run(&["run", "--config", &cfg]).status.code(), Some(0));
    let o = run(&["run", "--config", &cfg, "--seed", "2", "--out", out_b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let a = fs::read(out_a.join("samples.csv")).unwrap();
    let b = fs::read(out_b.join("samples.csv")).unwrap();
    assert_ne!(a, b);
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_b.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["seed"], 2);
}

#[test]
fn multiple_chains_write_one_file_each() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write(dir.path(), "c.json", &small_config(&out, "C1_d1", 5));
    let o = run(&["run", "--config", &cfg, "--chains", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let mut contents = Vec::new();
    for k in 0..3 {
        let csv = fs::read_to_string(out.join(format!("samples_chain{k}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 91);
        contents.push(csv);
    }
    assert_ne!(contents[0], contents[1]);
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["chains"].as_array().unwrap().len(), 3);
    assert_eq!(stats["accepted"], 300);
}

#[test]
fn config_echo_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("first");
    let cfg = write(dir.path(), "c.json", &small_config(&out, "C3_d2", 8));
    assert_eq!(run(&["run", "--config", &cfg]).status.code(), Some(0));
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    let mut echo = stats["config"].clone();
    let second = dir.path().join("second");
    echo["out_dir"] = serde_json::Value::String(second.to_str().unwrap().into());
    let echo_path = write(dir.path(), "echo.json", &echo.to_string());
    assert_eq!(run(&["run", "--config", &echo_path]).status.code(), Some(0));
    assert_eq!(
        fs::read(out.join("samples.csv")).unwrap(),
        fs::read(second.join("samples.csv")).unwrap()
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let no_instance = write(dir.path(), "a.json", r#"{"chains": 1}"#);
    let o = run(&["run", "--config", &no_instance]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let unknown = write(dir.path(), "b.json", r#"{"instance": "C9_d1"}"#);
    assert_eq!(run(&["run", "--config", &unknown]).status.code(), Some(2));
    let bad_eta = write(dir.path(), "c.json", r#"{"instance": "C1_d1", "sampler": {"eta": -1.0}}"#);
    assert_eq!(run(&["run", "--config", &bad_eta]).status.code(), Some(2));
    assert_eq!(run(&["run"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn inline_instance_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(
            r#"{{"instance": {{"name": "wide", "kind": "constrained", "dim": 2,
                 "body": {{"type": "box", "half_width": 1.0}}, "f": {{"type": "zero"}}}},
                 "sampler": {{"iterations": 20, "burn_in": 0}}, "out_dir": {:?}}}"#,
            dir.path().join("out")
        ),
    );
    assert_eq!(run(&["run", "--config", &cfg]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "C1_d1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("rgo_ks_coord1"));
    assert_eq!(run(&["verify", "C1_d8"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn sampler_failure_exits_4_and_flushes_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    // One proposal per RGO call is far too few on P1; some call must fail.
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(
            r#"{{"instance": "P1_d1", "sampler": {{"iterations": 500, "burn_in": 0, "proposal_budget": 1}}, "out_dir": {:?}}}"#,
            out
        ),
    );
    let o = run(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(4));
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    assert!(stats["chains"][0]["error"].as_str().unwrap().contains("budget"));
    let rows = fs::read_to_string(out.join("samples.csv")).unwrap().lines().count() - 1;
    assert_eq!(rows as u64, stats["accepted"].as_u64().unwrap());
}
