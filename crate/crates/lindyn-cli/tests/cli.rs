//! End-to-end checks of the report contract: determinism across worker
//! counts, schema validity of every subcommand's output, and the exit-code
//! convention.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lindyn"))
}

fn run(args: &[&str], out_dir: &Path) -> std::process::Output {
    bin()
        .args(args)
        .arg("--out-dir")
        .arg(out_dir)
        .output()
        .expect("binary runs")
}

const ALL_SUBCOMMANDS: &[&str] = &[
    "orbit-coverage",
    "coupled-orbit",
    "torus-closure",
    "winding-props",
    "lemma-map-demo",
    "sc-criterion",
    "combine-witnesses",
    "rplus-classify",
    "ray-obstruction",
    "su-identities",
    "krylov",
    "vandermonde",
    "direct-sum-cyclicity",
    "ratio-structure",
    "volterra",
    "asymptotics",
    "semigroup-ex1",
];

#[test]
fn every_subcommand_passes_and_validates_against_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ALL_SUBCOMMANDS {
        let out = run(&[sub, "--seed", "7"], dir.path());
        assert!(
            out.status.success(),
            "{sub} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report = dir.path().join(format!("{sub}.json"));
        let check = bin()
            .args(["validate-report", "--file"])
            .arg(&report)
            .output()
            .unwrap();
        assert!(
            check.status.success(),
            "{sub} report invalid: {}",
            String::from_utf8_lossy(&check.stderr)
        );
    }
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    for sub in ["direct-sum-cyclicity", "su-identities", "winding-props"] {
        let d1 = tempfile::tempdir().unwrap();
        let d8 = tempfile::tempdir().unwrap();
        assert!(run(&[sub, "--seed", "99", "--jobs", "1"], d1.path()).status.success());
        assert!(run(&[sub, "--seed", "99", "--jobs", "8"], d8.path()).status.success());
        let name = format!("{sub}.json");
        let a = std::fs::read(d1.path().join(&name)).unwrap();
        let b = std::fs::read(d8.path().join(&name)).unwrap();
        assert_eq!(a, b, "{sub} report differs between 1 and 8 workers");
    }
}

#[test]
fn failing_check_exits_one_but_still_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    // an orbit of 50 points cannot 1e-3-cover the circle
    let cfg = dir.path().join("short.toml");
    std::fs::write(&cfg, "[params]\nn = 50\n").unwrap();
    let out = bin()
        .args(["orbit-coverage", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = std::fs::read_to_string(dir.path().join("orbit-coverage.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(false));
}

#[test]
fn malformed_config_exits_two_without_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "seed = \"not a number\"\n").unwrap();
    let out = bin()
        .args(["krylov", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("krylov.json").exists());
}

#[test]
fn bad_parameter_type_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[params]\nseeds = \"many\"\n").unwrap();
    let out = bin()
        .args(["winding-props", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("winding-props.json").exists());
}

#[test]
fn csv_format_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["asymptotics", "--format", "csv"], dir.path());
    assert!(out.status.success());
    let table = std::fs::read_to_string(dir.path().join("asymptotics.csv")).unwrap();
    assert!(table.starts_with("n,ln_a,ln_b,ratio,normalized_exponent\n"));
    assert!(table.lines().count() > 3);
}

#[test]
fn csv_format_without_a_table_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["krylov", "--format", "csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_report_flags_schema_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema_version\": \"1\"}\n").unwrap();
    let out = bin().args(["validate-report", "--file"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let missing = dir.path().join("nope.json");
    let out = bin()
        .args(["validate-report", "--file"])
        .arg(&missing)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_seed_is_used_and_cli_seed_overrides_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("seeded.toml");
    std::fs::write(&cfg, "seed = 11\n").unwrap();
    let out = bin()
        .args(["krylov", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("krylov.json")).unwrap())
            .unwrap();
    assert_eq!(doc["seed"], serde_json::json!(11));

    let out = bin()
        .args(["krylov", "--config"])
        .arg(&cfg)
        .args(["--seed", "5", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("krylov.json")).unwrap())
            .unwrap();
    assert_eq!(doc["seed"], serde_json::json!(5));
}
