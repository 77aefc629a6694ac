use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use h1lab_cli::report::RunReport;

fn h1lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h1lab")).args(args).output().unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("h1lab-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn report(out: &Output) -> RunReport {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn reproduce_json_is_stable() {
    let a = h1lab(&["reproduce", "--p", "2", "--json", "-"]);
    let b = h1lab(&["reproduce", "--p", "2", "--json", "-"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert!(r.overall_pass);
    assert!(r.timings_ms.is_none());
    assert_eq!(r.steps.len(), 11);
}

#[test]
fn bad_prime_exits_with_two() {
    let out = h1lab(&["reproduce", "--p", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p:"));
    let out = h1lab(&["reproduce", "--p", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn h1_keyword_and_cyc() {
    let out = h1lab(&["h1", "--group", "G2", "--p", "2", "--cyc", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.steps[0].details["h1_invariant_factors"], serde_json::json!([2, 4]));
    assert_eq!(r.steps[0].details["h1cyc_invariant_factors"], serde_json::json!([2, 2]));
}

#[test]
fn summand_from_files() {
    let g = scratch("z2z4.json", r#"{"invariant_factors": [2, 4]}"#);
    let s = scratch("sub.json", r#"{"generators": [[0, 2]]}"#);
    let out = h1lab(&["summand", "--group", g.to_str().unwrap(), "--subgroup", s.to_str().unwrap(), "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.steps[0].details["is_summand"], serde_json::json!(false));
    assert!(r.overall_pass);

    let bad = scratch("bad.json", r#"{"invariant_factors": [2, 4], "extra": 1}"#);
    let out = h1lab(&["summand", "--group", bad.to_str().unwrap(), "--subgroup", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuzz_config_matches_flags() {
    let cfg = scratch(
        "cfg.json",
        r#"{"lemma": "2.3", "trials": 50, "seed": 9, "max_order": 32, "n": 12, "sampler": "S2"}"#,
    );
    let a = h1lab(&["fuzz", "--config", cfg.to_str().unwrap(), "--json", "-"]);
    let b = h1lab(&[
        "fuzz", "--lemma", "2.3", "--trials", "50", "--seed", "9", "--max-order", "32", "--n", "12", "--json", "-",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let out = h1lab(&["fuzz", "--lemma", "4.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = h1lab(&["sweep", "--max-order", "64"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_sweep_passes() {
    let out = h1lab(&["sweep", "--max-order", "8", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).overall_pass);
}
