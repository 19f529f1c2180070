use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn g2forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2forge"))
        .args(args)
        .env_remove("G2FORGE_OUT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn without_timestamp(path: &Path) -> Value {
    let mut v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert!(v["timestamp"].is_string());
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn identities_report() {
    let out = g2forge(&["identities"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["status"], "pass");
    let c = check(&r, "identities/constants");
    assert_eq!(c["values"]["c_a"], "-4");
    assert_eq!(c["values"]["c_b"], "3");
    for c in r["checks"].as_array().unwrap() {
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn alt_convention_passes() {
    let out = g2forge(&["identities", "--convention", "alt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(check(&json(&out), "identities/constants")["values"]["lambda14"], "-1");
}

#[test]
fn corrupted_phi_fails() {
    let out = g2forge(&["identities", "--phi", "e123 + e145 + e167"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "fail");
}

#[test]
fn calibrate_subsets() {
    let r = json(&g2forge(&["calibrate"]));
    assert_eq!(check(&r, "calibrate/4567/normal-frame")["status"], "pass");
    let r = json(&g2forge(&["calibrate", "--subset", "1,2,3"]));
    assert_eq!(check(&r, "calibrate/123/class")["values"]["class"], "associative");
    let r = json(&g2forge(&["calibrate", "--subset", "1,2,4"]));
    assert_eq!(check(&r, "calibrate/124/class")["values"]["class"], "not-calibrated");
}

#[test]
fn bad_input_exits_3() {
    assert_eq!(g2forge(&["gerbe", "--sigma", "0.2"]).status.code(), Some(3));
    assert_eq!(g2forge(&["gerbe", "-K", "0"]).status.code(), Some(3));
    assert_eq!(g2forge(&["identities", "--convention", "nope"]).status.code(), Some(3));
    assert_eq!(g2forge(&["identities", "--phi", "e11"]).status.code(), Some(3));
    assert_eq!(g2forge(&["gerbe", "--axes", "1,2,4"]).status.code(), Some(3));
    assert_eq!(g2forge(&["chern-weil", "--manifolds", "/nonexistent.json"]).status.code(), Some(3));
    assert_eq!(g2forge(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(g2forge(&["--help"]).status.code(), Some(0));
}

#[test]
fn coarse_truncation_is_reported_not_failed() {
    let out = g2forge(&["gerbe", "-K", "1", "--sigma", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let l = check(&r, "gerbe/linking");
    assert_eq!(l["status"], "pass");
    assert!(l["note"].as_str().unwrap().contains("increase K"));
    assert!(l["residuals"]["abs_error"].as_f64().unwrap() > 0.02);
}

#[test]
fn artifacts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = g2forge(&["gerbe", "-K", "3", "--sigma", "0.05", "--seed", "7", "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(without_timestamp(&a.join("report.json")), without_timestamp(&b.join("report.json")));
    for f in ["f0.csv", "h0.csv", "higgs.csv"] {
        assert_eq!(fs::read(a.join("fields").join(f)).unwrap(), fs::read(b.join("fields").join(f)).unwrap());
    }
    let manifest = fs::read_to_string(a.join("manifest.txt")).unwrap();
    assert_eq!(manifest.lines().count(), 4);
    for line in manifest.lines() {
        let parts: Vec<_> = line.split_whitespace().collect();
        let bytes = fs::read(a.join(parts[2])).unwrap();
        assert_eq!(parts[0], hex::encode(Sha256::digest(&bytes)));
        assert_eq!(parts[1], bytes.len().to_string());
    }
}

#[test]
fn env_overrides_out() {
    let dir = tempfile::tempdir().unwrap();
    let flag = dir.path().join("flag");
    let env = dir.path().join("env");
    let out = Command::new(env!("CARGO_BIN_EXE_g2forge"))
        .args(["chern-weil", "--out", flag.to_str().unwrap()])
        .env("G2FORGE_OUT", &env)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(env.join("report.json").exists());
    assert!(!flag.exists());
}

#[test]
fn cech_with_complex_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s2.json");
    let s2 = g2forge::FiniteComplex::from_simplices("S2", &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
    fs::write(&path, serde_json::to_string(&s2).unwrap()).unwrap();
    let out = g2forge(&["cech", "--complex", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(check(&r, "cech/s2/h2")["values"]["rank"], 1);
    assert_eq!(check(&r, "cech/s2/h1")["values"]["rank"], 0);
}
