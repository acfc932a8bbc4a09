//! End-to-end command-line checks: exit codes, witnesses, determinism,
//! and round-tripping of emitted manifests.

use std::path::PathBuf;
use std::process::{Command, Output};

fn manifest_text() -> &'static str {
    r#"{
        "conductor": 4,
        "base": {"p": 5, "f": 1, "kind": "finite"},
        "seed": 7,
        "groups": {"t": {"cayley": [[0]]}},
        "gsets": {"pt": {"group": "t", "points": 1, "frobenius": [0], "g_action": [[0]]}},
        "sheaves": {
            "line":  {"gset": "pt", "stalks": [{"dim": 1, "rho_K": {"0": ["1"]}, "frob": ["z"]}]},
            "line2": {"gset": "pt", "stalks": [{"dim": 1, "rho_K": {"0": ["1"]}, "frob": ["2*z"]}]}
        },
        "systems": {
            "good": {"sigmas": [1, 1], "objects": [{"plus": ["line"]}, {"plus": ["line"]}]},
            "bad":  {"sigmas": [1, 1], "objects": [{"plus": ["line"]}, {"plus": ["line2"]}]}
        }
    }"#
}

fn manifest_file() -> PathBuf {
    let path = std::env::temp_dir().join(format!("equichar-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, manifest_text()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    let manifest = manifest_file();
    Command::new(env!("CARGO_BIN_EXE_equichar"))
        .arg("--manifest")
        .arg(&manifest)
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn validate_accepts_the_manifest() {
    let out = run(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("conductor 4"), "{text}");
}

#[test]
fn malformed_manifest_exits_with_code_two() {
    let path = std::env::temp_dir().join(format!("equichar-cli-bad-{}.json", std::process::id()));
    std::fs::write(&path, "{ not json").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_equichar"))
        .args(["--manifest", path.to_str().unwrap(), "validate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compatible_system_exits_zero() {
    let out = run(&["check", "--system", "good"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn incompatible_system_exits_one_with_a_witness() {
    let out = run(&["check", "--system", "bad", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["compatible"], serde_json::json!(false));
    assert!(v["witness"].is_object(), "{v}");
}

#[test]
fn unknown_entity_exits_with_code_two() {
    let out = run(&["check", "--system", "missing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_deterministic() {
    for args in [
        vec!["trace", "--system", "good", "--json"],
        vec!["check", "--system", "bad", "--json"],
        vec!["descend", "--m", "2", "--g", "0", "--sheaf", "line", "--json"],
        vec!["op", "--name", "dual", "--lhs", "line"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
    }
}

#[test]
fn descend_emits_a_reparsable_manifest_with_a_passing_certificate() {
    let out = run(&["descend", "--m", "3", "--g", "0", "--sheaf", "line", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in v["certificate"].as_array().unwrap() {
        assert_eq!(row["ok"], serde_json::json!(true));
    }
    // the emitted document must itself parse and validate
    let doc: equichar::manifest::ManifestDoc =
        serde_json::from_value(v["descended"].clone()).unwrap();
    let resolved = equichar::manifest::resolve_manifest(&doc).unwrap();
    assert_eq!(resolved.sheaves.len(), 1);
}

#[test]
fn op_output_round_trips_through_the_parser() {
    let out = run(&["op", "--name", "tensor", "--lhs", "line", "--rhs", "line2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: equichar::manifest::ManifestDoc = serde_json::from_slice(&out.stdout).unwrap();
    let resolved = equichar::manifest::resolve_manifest(&doc).unwrap();
    let sheaf = resolved.sheaves.values().next().unwrap();
    assert_eq!(sheaf.total_dim(), 1);
}

#[test]
fn verify_runs_a_named_suite() {
    let out = run(&["verify", "--suite", "adjunction"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed 7"), "{text}");
    assert!(text.contains("[pass] adjunction"), "{text}");
}

#[test]
fn window_below_the_certified_bound_warns() {
    let out = run(&["check", "--system", "good", "--window", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("certified bound"), "{err}");
}
