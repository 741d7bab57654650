use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_badweave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn read_records(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.jsonl");
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "construct",
        "--pairs",
        "1/2,1/2",
        "--theta",
        "sqrt(2)",
        "--R",
        "16",
        "--depth",
        "3",
        "--trim",
        "desk",
        "--out",
        tree.to_str().unwrap(),
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = read_records(&tree);
    assert_eq!(recs[0]["kind"], "params");
    assert_eq!(recs[0]["c1"], "1/16384");
    let last = recs.last().unwrap();
    assert_eq!(last["kind"], "certificate");
    assert_eq!(read_records(&cert)[0], *last);

    let v = run(&["verify", "--point-from", tree.to_str().unwrap(), "--Hmax", "4096"]);
    assert_eq!(v.status.code(), Some(0));
    let r = &records(&v)[0];
    assert_eq!(r["dual"], "pass");
    assert_eq!(r["simultaneous"], "pass");
    // the certificate alone suffices
    let v = run(&["verify", "--point-from", cert.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["construct", "--depth", "2", "--pairs", "1/2,1/2;1/3,2/3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let sweep = ["check-theorem4", "--depth", "2", "--seed", "7"];
    assert_eq!(run(&sweep).stdout, run(&sweep).stdout);
}

#[test]
fn rational_theta_is_rejected() {
    let out = run(&["construct", "--theta", "1/2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta must be a badly approximable irrational"));
}

#[test]
fn config_file_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"pairs": ["1/2,1/2"], "R": 16, "depth": 2, "Q": 50}"#).unwrap();
    let out = run(&["check-lemma1", "--config", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out)[0]["Q"], 50);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"pairs": ["1/2,1/2"], "depht": 2}"#).unwrap();
    let out = run(&["construct", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("depht"));

    let typed = dir.path().join("typed.json");
    std::fs::write(&typed, r#"{"R": "sixteen"}"#).unwrap();
    let out = run(&["construct", "--config", typed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("R:"));
}

#[test]
fn verify_reports_a_witness() {
    // y = 0 fails at (A, B) = (0, 1)
    let out = run(&["verify", "--point", "0", "--c", "1/1000", "--Hmax", "64"]);
    assert_eq!(out.status.code(), Some(2));
    let w = &records(&out)[0]["dual"];
    assert_eq!(w["kind"], "dual");
    assert_eq!((w["A"].as_i64(), w["B"].as_i64()), (Some(0), Some(1)));
    assert_eq!(w["value_num"], "0");
}

#[test]
fn empty_collection_exit_code() {
    let out = run(&["construct", "--trim", "paper", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn transfer_witness_records() {
    let out = run(&["transfer", "--x", "1/7", "--y", "2/7", "--c", "1/200"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[0]["verified"], true);
    let w = &recs[1];
    for key in ["kind", "q", "A", "B", "value_num", "value_den"] {
        assert!(w.get(key).is_some(), "{key}");
    }
    let out = run(&["transfer", "--x", "1/7", "--y", "2/7", "--c", "1/200", "--dual", "1,3"]);
    let recs = records(&out);
    assert_eq!(recs[1]["kind"], "simultaneous");
    assert_eq!(recs[1]["q"], 7);
    // c ≥ 1/4 is a precondition failure, not rescaled
    let out = run(&["transfer", "--x", "1/7", "--y", "2/7", "--c", "1/2", "--dual", "1,3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweeps_pass() {
    for args in [
        vec!["check-counts", "--depth", "3"],
        vec!["check-prop1", "--depth", "3"],
        vec!["refine", "--depth", "2"],
        vec!["measure", "--depth", "2", "--windows", "200"],
        vec!["check-theorem4", "--depth", "3"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn plot_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "emit-plot-data",
        "--depth",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
        "--figure-point",
        "41,0,99",
        "--tau",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(dir.path().join("removals.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap().len(), 14);
    assert!(rdr.records().count() > 0);
    let fig = std::fs::read_to_string(dir.path().join("figure.csv")).unwrap();
    assert!(fig.starts_with("A,B,height"));
}

#[test]
fn thread_count_does_not_change_output() {
    let run_with = |n: &str| {
        Command::new(env!("CARGO_BIN_EXE_badweave"))
            .args(["construct", "--depth", "2"])
            .env("BADWEAVE_THREADS", n)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run_with("1"), run_with("4"));
    let bad = Command::new(env!("CARGO_BIN_EXE_badweave"))
        .args(["refine"])
        .env("BADWEAVE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(4));
}
