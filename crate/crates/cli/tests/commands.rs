use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_zfrt");

const MIRROR: &str = r#"{"N": 2, "grid": ["1", "2"], "smatrix": {"family": "rational", "g": "1"}, "defect": {"family": "mirror", "flip": true}}"#;
const TAMPERED: &str =
    r#"{"N": 2, "grid": ["1", "2"], "smatrix": {"family": "rational", "g": "1"}, "defect": {"family": "tampered"}}"#;
const DECIMAL: &str =
    r#"{"N": 2, "grid": ["0.5", "2"], "smatrix": {"family": "identity"}, "defect": {"family": "free"}}"#;

fn config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn zfrt(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = TempDir::new().unwrap();
    let good = config(&dir, "good.json", MIRROR);
    let bad = config(&dir, "bad.json", TAMPERED);
    let decimal = config(&dir, "decimal.json", DECIMAL);
    assert_eq!(zfrt(&["check", "--config", s(&good)]).status.code(), Some(0));
    assert_eq!(zfrt(&["verify", "defect", "--config", s(&bad)]).status.code(), Some(1));
    assert_eq!(zfrt(&["check", "--config", s(&decimal)]).status.code(), Some(2));
    assert_eq!(zfrt(&["verify", "prop9", "--config", s(&good)]).status.code(), Some(2));
    assert_eq!(zfrt(&["check", "--config", s(&dir.path().join("missing.json"))]).status.code(), Some(2));
    assert_eq!(zfrt(&["frobnicate"]).status.code(), Some(2));
    let out = zfrt(&["nf", "a[1](1) *", "--config", s(&good)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 10"));
    assert_eq!(zfrt(&["nf", "a[3](1)", "--config", s(&good)]).status.code(), Some(2));
    assert_eq!(zfrt(&["nf", "a[1](7)", "--config", s(&good)]).status.code(), Some(2));
}

#[test]
fn empty_target_list_gives_empty_passing_report() {
    let dir = TempDir::new().unwrap();
    let good = config(&dir, "good.json", MIRROR);
    let out = zfrt(&["verify", "--config", s(&good)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"], serde_json::json!([]));
    assert_eq!(v["pass"], serde_json::json!(true));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let good = config(&dir, "good.json", MIRROR);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let run = zfrt(&["verify", "smatrix,defect,projection,rho2,coideal", "--config", s(&good), "--output", s(out)]);
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    let digest = v["config-digest"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    let check = v["checks"][0].as_object().unwrap();
    for key in ["id", "status", "momenta", "witness_nonzero_entries", "elapsed_ms"] {
        assert!(check.contains_key(key), "{key}");
    }
    // Reformatting a report is a fixpoint.
    let again = zfrt(&["report", "--input", s(&a), "--format", "json"]);
    assert_eq!(again.stdout, ta);
    let md = zfrt(&["report", "--input", s(&a), "--format", "markdown"]);
    assert_eq!(md.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&md.stdout).contains(digest));
    assert_eq!(zfrt(&["report", "--input", s(&a), "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn timings_are_opt_in() {
    let dir = TempDir::new().unwrap();
    let good = config(&dir, "good.json", MIRROR);
    let out = zfrt(&["verify", "rho2", "--config", s(&good), "--timings", "--format", "markdown"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("result: **PASS**"));
}

#[test]
fn normal_form_and_commutator() {
    let dir = TempDir::new().unwrap();
    let good = config(&dir, "good.json", MIRROR);
    let out = zfrt(&["nf", "a[1](1) * ad[1](1)", "--config", s(&good)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with("+ one") || text.contains(" + one + ") || text.starts_with("one"), "{text}");
    // Equal-momentum creators at one index commute.
    let out = zfrt(&["commute", "ad[1](2)", "ad[1](2)", "--config", s(&good)]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n");
    let out = zfrt(&["commute", "t[1,1](1)", "a[1](2)", "--config", s(&good), "--opaque-dressers"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tampered_defect_fails_with_witnesses() {
    let dir = TempDir::new().unwrap();
    let bad = config(&dir, "bad.json", TAMPERED);
    let out = zfrt(&["verify", "defect", "--config", s(&bad)]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::json!(false));
    let failing: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| c["witness_nonzero_entries"].as_u64().unwrap() > 0));
}
