//! End-to-end runs of the `sp4lab` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn sp4lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sp4lab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = sp4lab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write_temp(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sp4lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const PHI0_5: &str = r#"{"level": 5, "generators": [[-1,0,0,0, 0,1,0,0, 0,0,-1,0, 0,0,0,1]]}"#;

#[test]
fn atlas_count() {
    let v = json(&["atlas", "--level", "3", "--family", "D", "--count"]);
    assert_eq!(v["command"], "atlas");
    assert_eq!(v["result"]["count"], 40);
    let v = json(&["atlas", "--level", "3", "--family", "line", "--count"]);
    assert_eq!(v["result"]["count"], 240);
}

#[test]
fn verify_identities_level_nine() {
    let v = json(&["verify-identities", "--level", "9", "--trials", "1000", "--seed", "7"]);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks.iter().filter(|c| c["asserted"] == true) {
        assert_eq!(c["trials"], 1000);
        assert_eq!(c["failures"], 0, "{}", c["name"]);
    }
}

#[test]
fn census_is_satisfied() {
    let v = json(&["toric", "census", "--p", "2", "--s", "3", "--epsilon", "1/4"]);
    assert_eq!(v["result"]["satisfied"], true);
}

#[test]
fn subgroup_files() {
    let id = write_temp("id.json", r#"{"level": 5, "generators": [[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]]}"#);
    let v = json(&["ram-report", "--subgroup", id.to_str().unwrap()]);
    assert_eq!(v["result"]["subgroup_order"], "1");

    let phi = write_temp("phi.json", PHI0_5);
    let v = json(&["ram-report", "--subgroup", phi.to_str().unwrap(), "--adjoin-center"]);
    assert_eq!(v["result"]["subgroup_order"], "4");

    let bad = write_temp(
        "bad.json",
        r#"{"level": 5, "generators": [[1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1], [2,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1]]}"#,
    );
    let out = sp4lab(&["ram-report", "--subgroup", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("generator 1 is not symplectic"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(sp4lab(&["--help"]).status.code(), Some(0));
    assert_eq!(sp4lab(&["--version"]).status.code(), Some(0));
    assert_eq!(sp4lab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(sp4lab(&["atlas", "--level", "300", "--family", "D", "--count"]).status.code(), Some(1));
    // randomized runs need a seed
    assert_eq!(sp4lab(&["verify-identities", "--level", "9"]).status.code(), Some(1));
    // kernel generation is only claimed for p >= 5
    assert_eq!(sp4lab(&["congruence", "kernel-gen", "--p", "3", "--i", "2"]).status.code(), Some(1));
}

#[test]
fn formats_and_determinism() {
    let base = ["bound-check", "--level", "3", "--random", "4", "--seed", "11"];
    let one = sp4lab(&[&base[..], &["--threads", "1"]].concat());
    let two = sp4lab(&[&base[..], &["--threads", "2"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    let csv = sp4lab(&["atlas", "--level", "3", "--family", "cusp", "--count", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&csv.stdout).lines().next(), Some("\"field\",\"value\""));
    let text = sp4lab(&["quartic", "relations", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("command: quartic"));
}
