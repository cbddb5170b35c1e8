//! End-to-end checks of the command-line surface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcmono"))
}

#[test]
fn stokes_p4_chamber0() {
    let out = bin()
        .args(["stokes", "--space", "P", "--k", "5", "--chamber", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(
        first.split_whitespace().collect::<Vec<_>>(),
        vec!["[", "1", "5", "-5", "-40", "15", "]"]
    );
}

#[test]
fn stokes_g23_chamber0() {
    let out = bin()
        .args(["stokes", "--space", "G", "--k", "3", "--r", "2", "--chamber", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1  3 -3"));
}

#[test]
fn stokes_rejects_r_equal_k() {
    let out = bin()
        .args(["stokes", "--space", "G", "--k", "3", "--r", "3", "--chamber", "0"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn connection_rejects_low_precision() {
    let out = bin()
        .args([
            "connection", "--space", "P", "--k", "2", "--backend", "numeric", "--precision", "32",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn verify_tables_suite_passes() {
    let out = bin().args(["verify", "--suite", "tables", "--kmax", "4"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().last().unwrap().starts_with("PASS"));
}

#[test]
fn braid_walks_one_chamber() {
    let dir = std::env::temp_dir().join(format!("qcmono-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let data_path = dir.join("p2.json");
    let out = bin()
        .args([
            "connection", "--space", "P", "--k", "3", "--chamber", "0", "--format", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    std::fs::write(&data_path, &out.stdout).unwrap();
    // one wall crossing
    let out = bin()
        .args(["braid", data_path.to_str().unwrap(), "b2", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1 -3 -6"), "{text}");
    // the word and its inverse echo the starting matrix
    let out = bin()
        .args(["braid", data_path.to_str().unwrap(), "b2 B2", "--format", "text"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1  3 -3"), "{text}");
    // empty word echoes the input
    let out = bin()
        .args(["braid", data_path.to_str().unwrap(), "", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let echoed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let original: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&data_path).unwrap()).unwrap();
    assert_eq!(echoed["stokes"], original["stokes"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn deterministic_output() {
    let run = || {
        bin()
            .args(["connection", "--space", "G", "--k", "4", "--r", "2", "--format", "text"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}
