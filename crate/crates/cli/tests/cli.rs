use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cyclarc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclarc"))
        .args(args)
        .env_remove("CYCLARC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid json")
}

fn log_tables(dir: &Path) -> Vec<String> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".log32"))
        .collect()
}

#[test]
fn construct_q3_succeeds_on_stdout() {
    let out = cyclarc(&["construct", "--q", "3", "--M", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out.stdout);
    assert_eq!(cert["verdict"], true);
    assert_eq!(cert["M"], 1);
    assert_eq!(cert["params"]["v"], 729);
    assert_eq!(cert["checks"]["direct"]["inverse_closed"], true);
}

#[test]
fn impure_instance_exits_2_with_stage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = cyclarc(&[
        "construct",
        "--q",
        "19",
        "--M",
        "3",
        "--verify",
        "fast",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = json(&out.stderr);
    assert_eq!(err["status"], "failed");
    assert_eq!(err["failure_stage"], "purity");
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert["checks"]["pure"], false);
}

#[test]
fn bad_input_exits_1() {
    for args in [
        &["construct", "--q", "6", "--M", "1"][..],
        &["construct", "--q", "2", "--M", "1"],
        &["construct", "--q", "7", "--M", "5"],
        &["periods", "--q", "7", "--N", "5"],
    ] {
        let out = cyclarc(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn construct_is_deterministic() {
    let a = cyclarc(&["construct", "--q", "7", "--M", "3", "--verify", "fast"]);
    let b = cyclarc(&["construct", "--q", "7", "--M", "3", "--verify", "fast"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let cert = json(&a.stdout);
    assert_eq!(cert["spectrum"][2][0], -271);
}

#[test]
fn sieve_csv_rows_match_membership() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("s.csv");
    let sum_path = dir.path().join("s.json");
    let args = [
        "sieve",
        "--M",
        "7",
        "--h",
        "4",
        "--alpha",
        "1",
        "--beta",
        "-1",
        "--bound",
        "2000",
        "--out",
        csv_path.to_str().unwrap(),
        "--summary",
        sum_path.to_str().unwrap(),
    ];
    let out = cyclarc(&args);
    assert_eq!(out.status.code(), Some(0));
    let first = std::fs::read(&csv_path).unwrap();
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "p",
            "M",
            "h",
            "alpha",
            "beta",
            "eta2",
            "eta_minus1",
            "member"
        ]
    );
    let mut members = Vec::new();
    for row in rdr.records() {
        let row = row.unwrap();
        let p: u64 = row[0].parse().unwrap();
        assert_eq!(p % 7, 4);
        if &row[7] == "1" {
            assert_eq!(&row[5], "-1");
            assert_eq!(&row[6], "-1");
            members.push(p);
        }
    }
    assert!(members.starts_with(&[11, 67, 179]));
    assert!(members.iter().all(|p| p % 56 == 11));
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(&sum_path).unwrap()).unwrap();
    assert!(summary.is_object());

    assert_eq!(cyclarc(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&csv_path).unwrap(), first);
}

#[test]
fn cache_dir_flag_and_env_write_log_table() {
    let dir = tempfile::tempdir().unwrap();
    let plain = cyclarc(&["construct", "--q", "3", "--M", "1"]);
    let flag = cyclarc(&[
        "construct",
        "--q",
        "3",
        "--M",
        "1",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(log_tables(dir.path()).len(), 1);
    assert_eq!(flag.stdout, plain.stdout);

    let env_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cyclarc"))
        .args(["construct", "--q", "3", "--M", "1"])
        .env("CYCLARC_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(log_tables(env_dir.path()), log_tables(dir.path()));

    let again = cyclarc(&[
        "construct",
        "--q",
        "3",
        "--M",
        "1",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(again.stdout, plain.stdout);
}

#[test]
fn analysis_subcommands_succeed() {
    let arc = cyclarc(&["arc-check", "--q", "7", "--M", "3"]);
    assert_eq!(arc.status.code(), Some(0));
    assert_eq!(json(&arc.stdout)["report"]["is_arc"], true);

    let periods = cyclarc(&["periods", "--q", "7", "--N", "19"]);
    assert_eq!(periods.status.code(), Some(0));

    let part = cyclarc(&["partition", "--q", "7", "--M", "3"]);
    assert_eq!(part.status.code(), Some(0));

    let ident = cyclarc(&["identity-check", "--q", "7", "--M", "3"]);
    assert_eq!(ident.status.code(), Some(0));

    let rel = cyclarc(&["relations", "--p", "11", "--M", "7"]);
    assert_eq!(rel.status.code(), Some(0));

    let empt = cyclarc(&["emptiness", "--M", "7", "--bound", "2000"]);
    assert_eq!(empt.status.code(), Some(0));

    let chr = cyclarc(&["characterize", "--M", "3", "--bound", "500"]);
    assert_eq!(chr.status.code(), Some(0));
}
