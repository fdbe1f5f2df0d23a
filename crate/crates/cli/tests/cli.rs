//! End-to-end tests of the `plie` binary: exit codes, the JSON schema, and
//! byte-stable output under a fixed seed.

use std::path::PathBuf;
use std::process::{Command, Output};

fn plie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plie")).args(args).output().expect("binary runs")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("plie-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn es_closed_form_digits() {
    let out = plie(&["es", "--n", "2", "--lambda", "1,0,0", "--s", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "plie/1");
    let a = v["closed_form"]["a"].as_f64().unwrap();
    let expected = (-0.5 / (2.0 * 2.0_f64.sqrt())).exp();
    assert!((a - expected).abs() < 1e-12);
    // Generic matrix agrees with the closed form entry.
    let m00 = v["matrix"][0][0][0].as_f64().unwrap();
    assert!((m00 - expected).abs() < 1e-10);
}

#[test]
fn decompose_identity() {
    let path = write_temp("id.json", "[[1,0],[0,1]]");
    let out = plie(&["decompose", "--matrix", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["b", "k"] {
        assert_eq!(v[key][0][0][0].as_f64().unwrap(), 1.0);
        assert_eq!(v[key][0][1][0].as_f64().unwrap(), 0.0);
    }
    std::fs::remove_file(path).ok();
}

#[test]
fn decompose_rejects_bad_det() {
    let path = write_temp("bad.json", "[[2,0],[0,1]]");
    let out = plie(&["decompose", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("machine-readable error record");
    assert!(err["error"].as_str().unwrap().contains("det"));
    std::fs::remove_file(path).ok();
}

#[test]
fn malformed_input_is_exit_one() {
    let path = write_temp("garbage.json", "not json");
    let out = plie(&["decompose", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_suite_passes_and_is_byte_stable() {
    let run = || plie(&["verify", "--suite", "inverse-relation", "--seed", "7"]);
    let first = run();
    assert!(first.status.success(), "verify exited nonzero");
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&first.stdout).contains("PASS"));
}

#[test]
fn verify_unknown_suite_is_exit_one() {
    let out = plie(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_all_suites_pass() {
    let out = plie(&["verify", "--suite", "all", "--seed", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    assert!(text.lines().filter(|l| l.contains("PASS")).count() >= 14);
}

#[test]
fn sweep_csv_has_expected_columns() {
    let out = plie(&["sweep", "--quantity", "b-tt", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,value,fitted_slope");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 3);
    assert_eq!(first[0], "0.1");
    let slope: f64 = first[2].parse().unwrap();
    assert!((0.9..=1.5).contains(&slope));
}

#[test]
fn delin_outputs_both_structures() {
    let out = plie(&["delin", "--lambda", "1.0,0.3,-0.2", "--s", "0.7"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let form = &v["delin_form"]["entries"];
    let pi = &v["poisson"]["entries"];
    // D * pi = -I on the (0,0) entry: sum_k form[0][k] pi[k][0] = -1.
    let mut acc = 0.0;
    for k in 0..6 {
        acc += form[0][k].as_f64().unwrap() * pi[k][0].as_f64().unwrap();
    }
    assert!((acc + 1.0).abs() < 1e-9);
    assert_eq!(v["delin_form"]["frame"][0], "t^L");
}

#[test]
fn bivector_an_at_point() {
    let out = plie(&["bivector", "--kind", "an", "--point", "1,0,0", "--s", "0.8"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Identity of AN: the bivector vanishes.
    for i in 0..3 {
        for j in 0..3 {
            assert!(v["entries"][i][j].as_f64().unwrap().abs() < 1e-12);
        }
    }
}
