use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skelflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn skeleton_of_two_unit_intervals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["skeleton", "--out", "o"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("o/skeleton.json"));
    assert_eq!(doc["command"], "skeleton");
    let atoms = doc["result"]["atoms"].as_array().unwrap();
    let got: Vec<(f64, f64)> = atoms
        .iter()
        .map(|a| (num(&a["x"]), num(&a["mass"])))
        .collect();
    assert_eq!(got, vec![(1.0, 1.0), (2.0, 1.0)]);
}

#[test]
fn inverse_open_recovers_the_intervals() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"measure": {"atoms": [{"x": 1, "mass": 1}, {"x": 2, "mass": 1}]}}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["--config", "c.json", "inverse-open", "--out", "o"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("o/inverse_open.json"));
    let set: Vec<Vec<f64>> = doc["result"]["set"]
        .as_array()
        .unwrap()
        .iter()
        .map(|iv| iv.as_array().unwrap().iter().map(num).collect())
        .collect();
    assert_eq!(set, vec![vec![0.0, 1.0], vec![2.0, 3.0]]);
    assert_eq!(num(&doc["result"]["round_trip_error"]), 0.0);
}

#[test]
fn evolve_at_time_one_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"t_grid": [0.5, 1.0]}"#).unwrap();
    let out = run(dir.path(), &["--config", "c.json", "evolve", "--out", "o"]);
    assert_eq!(out.status.code(), Some(3));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"]["kind"], "domain");
    assert_eq!(rec["error"]["code"], 3);
}

#[test]
fn malformed_config_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), "{\"depht\": 3}").unwrap();
    let out = run(dir.path(), &["--config", "c.json", "skeleton"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"]["kind"], "config");

    let out = run(dir.path(), &["--config", "missing.json", "skeleton"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compact_commands_reject_atomic_measures() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"measure": {"atoms": [{"x": 0, "mass": 1}]}}"#,
    )
    .unwrap();
    let out = run(dir.path(), &["--config", "c.json", "inverse-compact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        let out = run(
            dir.path(),
            &["--depth", "6", "inverse-compact", "--out", sub],
        );
        assert!(out.status.success());
        let out = run(dir.path(), &["evolve", "--out", sub]);
        assert!(out.status.success());
    }
    for name in [
        "inverse_compact.json",
        "gap_velocities.csv",
        "evolve.json",
        "evolve.csv",
    ] {
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs");
    }
}

#[test]
fn every_artifact_carries_the_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"outputs": {"plot": true}, "k_max": 6}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &["--config", "c.json", "converge", "--out", "o"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("o/convergence.json"));
    let hash = doc["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    let csv = fs::read_to_string(dir.path().join("o/convergence.csv")).unwrap();
    assert!(csv.contains(&format!("# config_hash: {hash}")));
    assert!(csv.contains("k,t,f-id,pairing,limit,error,bound"));
    assert!(dir.path().join("o/plot_convergence.py").exists());

    // the hash reflects command-line overrides
    let out = run(
        dir.path(),
        &[
            "--config", "c.json", "--depth", "3", "converge", "--out", "p",
        ],
    );
    assert!(out.status.success());
    let other = read_json(&dir.path().join("p/convergence.json"));
    assert_ne!(other["config_hash"].as_str().unwrap(), hash);
}

#[test]
fn pushforward_verification_passes_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify-pushforward", "--out", "o"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("o/pushforward.json"));
    assert_eq!(doc["result"]["passed"], true);
    assert!(num(&doc["residual"]["residual_length"]) > 0.0);
}

#[test]
fn oracle_clusters_match_the_skeleton() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--particles", "1000", "oracle", "--out", "o"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("o/oracle.json"));
    assert!(num(&doc["result"]["max_position_error"]) < 2e-3);
    assert!(num(&doc["result"]["max_mass_error"]) < 1e-12);
}

#[test]
fn cantor_dimension_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--depth", "10", "dimension", "--out", "o"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("o/dimension.json"));
    let est = num(&doc["result"]["fit"]["estimate"]);
    assert!((est - 2f64.ln() / 3f64.ln()).abs() < 0.05, "{est}");
}
