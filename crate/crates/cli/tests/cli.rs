use std::fs;
use std::process::{Command, Output};

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burgers-born"))
        .args(args)
        .env_remove("BURGERS_BORN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_shows_ten_experiments() {
    let o = tool(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10);
    for name in ["born-free", "variational", "ga-identities", "colehopf-3d"] {
        assert!(text.contains(name), "{name} missing from:\n{text}");
    }
}

#[test]
fn describe_names_theorem_and_thresholds() {
    let o = tool(&["describe", "born-free"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Born-rule theorem"));
    assert!(text.contains("1e-2"));
    let o = tool(&["describe", "variational"]);
    assert!(stdout(&o).contains("variational principle"));
    let o = tool(&["describe", "no-such-thing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no-such-thing"));
}

#[test]
fn malformed_key_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"pointz": 64}"#).unwrap();
    let o = tool(&["run", "ga-identities", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pointz"), "{}", stderr(&o));

    // A key that exists but is not used by this experiment.
    fs::write(&cfg, r#"{"n_paths": 1000}"#).unwrap();
    let o = tool(&["run", "ga-identities", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n_paths"));

    fs::write(&cfg, r#"{"experiment": "born-free"}"#).unwrap();
    let o = tool(&["run", "ga-identities", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = tool(&[
        "run",
        "ga-identities",
        "--config",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ga_identities_pass_and_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ga");
    let o = tool(&[
        "run",
        "ga-identities",
        "--out",
        out.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("[PASS]"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    for c in summary["checks"].as_array().unwrap() {
        assert!(c["measured"].as_f64().unwrap() <= 1e-10);
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["experiment"], "ga-identities");
    assert_eq!(manifest["seed"], 42);
}

#[test]
fn failed_criterion_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    // On a coarse grid the traveling front is visibly under-resolved.
    fs::write(&cfg, r#"{"experiment": "colehopf-1d", "points": 64}"#).unwrap();
    let o = tool(&[
        "run",
        "colehopf-1d",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn manifest_reruns_to_identical_summary() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let o = tool(&[
        "run",
        "complex-increments",
        "--seed",
        "7",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let first = fs::read(a.join("summary.json")).unwrap();
    let o = tool(&[
        "run",
        "complex-increments",
        "--config",
        a.join("manifest.json").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(first, fs::read(a.join("summary.json")).unwrap());
    let summary: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(summary["seed"], 7);
}
