use std::path::Path;
use std::process::{Command, Output};

use es_core::store::read_records;
use serde_json::Value;

fn es(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_es"))
        .args(args)
        .env_remove("ES_MAX_ORACLE_N")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    es(args).status.code().expect("exited normally")
}

fn stdout(args: &[&str]) -> String {
    let out = es(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["verify", "1009", "253", "88792", "2042216"]), 0);
    assert_eq!(code(&["verify", "35617", "8095", "126867754", "634338770"]), 1);
    assert_eq!(code(&["solve", "1008"]), 2);
    assert_eq!(code(&["solve", "193", "--form", "duv"]), 3);
    assert_eq!(code(&["solve", "29", "--form", "pair"]), 3);
    assert_eq!(code(&["verify", "0", "1", "1", "1"]), 2);
}

#[test]
fn rejected_flag_combinations_never_succeed() {
    for args in [
        &["--json", "--csv", "discover", "1009"][..],
        &["census", "2", "100", "--resume"],
        &["solve", "29", "--form", "gcd", "--t-max", "4"],
        &["census", "100", "2"],
        &["census", "0", "10"],
        &["enumerate", "0"],
        &["solve", "29", "--form", "nope"],
    ] {
        let c = code(args);
        assert_ne!(c, 0, "{args:?}");
    }
}

#[test]
fn enumerate_goldens() {
    let v = json(&["--json", "enumerate", "5"]);
    assert_eq!(v["count"], 2);
    let text = stdout(&["enumerate", "2"]);
    assert!(text.contains("(1, 2, 2)"), "{text}");
    assert!(text.contains("count: 1"), "{text}");
    let text = stdout(&["enumerate", "12"]);
    assert!(!text.contains("(2, 3, 4)"), "{text}");
    for shards in ["1", "3", "8"] {
        assert_eq!(stdout(&["enumerate", "1009", "--shards", shards]), stdout(&["enumerate", "1009"]));
    }
}

#[test]
fn oracle_bound_is_configurable() {
    let out = Command::new(env!("CARGO_BIN_EXE_es"))
        .args(["enumerate", "1009"])
        .env("ES_MAX_ORACLE_N", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_es"))
        .args(["enumerate", "1009"])
        .env("ES_MAX_ORACLE_N", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_parses() {
    let v = json(&["--json", "solve", "1009", "--form", "duv"]);
    assert!(v.is_object(), "{v}");
    let v = json(&["--json", "discover", "1009"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
    let v = json(&["--json", "verify", "1009", "253", "88792", "2042216"]);
    assert!(v.is_object(), "{v}");
    let csv = stdout(&["--csv", "discover", "1009"]);
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn census_jsonl_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.jsonl");
    let o = out.to_str().unwrap();
    stdout(&["census", "2", "3000", "--out", o]);
    let recs = read_records(&out).unwrap();
    assert_eq!(recs.len(), 430);
    let duv_less: Vec<u64> = recs.iter().filter(|r| r.has_duv == Some(false)).map(|r| r.p).collect();
    assert_eq!(duv_less, vec![193, 2521]);

    let lines = stdout(&["--json", "census", "2", "3000"]);
    assert_eq!(lines, std::fs::read_to_string(&out).unwrap());
}

fn census_file(dir: &Path, name: &str, shards: &str) -> Vec<u8> {
    let out = dir.join(name);
    stdout(&["census", "2", "5000", "--shards", shards, "--out", out.to_str().unwrap()]);
    std::fs::read(out).unwrap()
}

#[test]
fn census_is_byte_identical_across_shards() {
    let dir = tempfile::tempdir().unwrap();
    let one = census_file(dir.path(), "a", "1");
    assert_eq!(one, census_file(dir.path(), "b", "2"));
    assert_eq!(one, census_file(dir.path(), "c", "8"));
}

#[test]
fn resume_finishes_an_interrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let full = census_file(dir.path(), "full", "1");

    let part = dir.path().join("part");
    let p = part.to_str().unwrap();
    stdout(&["census", "2", "5000", "--out", p]);
    // cut the file mid-record, as a killed run would leave it
    let cut = full.len() * 2 / 3;
    std::fs::write(&part, &full[..cut]).unwrap();
    stdout(&["census", "2", "5000", "--out", p, "--resume"]);
    assert_eq!(std::fs::read(&part).unwrap(), full);
}

#[test]
fn resume_mismatch_and_unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.jsonl");
    let o = out.to_str().unwrap();
    stdout(&["census", "2", "500", "--out", o]);
    assert_eq!(code(&["census", "2", "600", "--out", o, "--resume"]), 5);
    assert_eq!(code(&["census", "2", "500", "--duv", "--out", o, "--resume"]), 5);

    let bad = dir.path().join("missing").join("c.jsonl");
    assert_eq!(code(&["census", "2", "500", "--out", bad.to_str().unwrap()]), 4);
}
