use std::process::Command;

use dieudonne::harness::{emit, make_oracles, run_suite, FixtureSet, Format, RunReport, Suite};

fn run(s: Suite) -> RunReport {
    run_suite(s, &FixtureSet::builtin(s).unwrap(), 0).unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dieudonne"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn empty_or_mismatched_sets_are_errors() {
    let mut set = FixtureSet::builtin(Suite::P5Table).unwrap();
    assert!(run_suite(Suite::EtaleTable, &set, 0).is_err());
    set.fixtures.clear();
    assert!(run_suite(Suite::P5Table, &set, 0).is_err());
}

#[test]
fn emitted_reports_are_byte_stable() {
    let a = run(Suite::EtaleTable);
    let b = run(Suite::EtaleTable);
    for f in [Format::Json, Format::Csv, Format::Text] {
        assert_eq!(emit(&a, f, false).unwrap(), emit(&b, f, false).unwrap());
    }
    let csv = emit(&a, Format::Csv, false).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.starts_with("id,pass,"));
}

#[test]
fn json_reports_round_trip() {
    let rep = run(Suite::P5Table);
    let with = emit(&rep, Format::Json, true).unwrap();
    assert_eq!(serde_json::from_str::<RunReport>(&with).unwrap(), rep);
    let without = emit(&rep, Format::Json, false).unwrap();
    assert!(!without.contains("millis"));
    let back: RunReport = serde_json::from_str(&without).unwrap();
    assert_eq!(back.results.len(), rep.results.len());
    assert!(back.results.iter().all(|r| r.millis == 0));
}

#[test]
fn frozen_oracles_regenerate_identically() {
    let fresh = make_oracles(0).unwrap();
    for set in fresh {
        let frozen = FixtureSet::builtin(set.suite).unwrap();
        assert_eq!(
            set.to_json().unwrap(),
            frozen.to_json().unwrap(),
            "{}",
            set.suite
        );
    }
}

#[test]
fn same_seed_same_report() {
    let set = FixtureSet::builtin(Suite::TheoremsOdd).unwrap();
    let mut small = set.clone();
    small.fixtures.retain(|f| f.id.starts_with("h1-p5"));
    let a = run_suite(Suite::TheoremsOdd, &small, 7).unwrap();
    let b = run_suite(Suite::TheoremsOdd, &small, 7).unwrap();
    assert_eq!(
        emit(&a, Format::Json, false).unwrap(),
        emit(&b, Format::Json, false).unwrap()
    );
    assert!(a.ok());
}

#[test]
fn cli_suite_and_table() {
    let (code, out) = cli(&["suite", "p5-table"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("3 passed, 0 failed"));
    let (code, out) = cli(&["--format", "csv", "table", "--fixtures", "etale-table"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 11);
    let (code, _) = cli(&["suite", "no-such-suite"]);
    assert_eq!(code, 2);
}

#[test]
fn cli_module_pipeline() {
    let (code, module) = cli(&["module", "from-eo", "0,0,1", "--p", "3"]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("dieudonne-cli-{}.json", std::process::id()));
    std::fs::write(&path, module).unwrap();
    let (code, out) = cli(&["--format", "json", "module", "eo", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["eo"], serde_json::json!([0, 0, 1]));
}

#[test]
fn cli_curve_and_cover() {
    let (code, out) = cli(&[
        "--format",
        "json",
        "analyze-curve",
        "--p",
        "3",
        "--f",
        "x^3 - x + 1",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["genus"], 1);
    // ramified at infinity, so the etale analysis refuses it
    let (code, _) = cli(&[
        "analyze-cover",
        "--p",
        "3",
        "--curve",
        "x^3 - x + 1",
        "--g",
        "x",
    ]);
    assert_ne!(code, 0);
}
