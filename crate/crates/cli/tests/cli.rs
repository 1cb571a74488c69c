use std::path::PathBuf;
use std::process::{Command, Output};

use crcount_cli::{emit, exit, parse_problem, run_count, Algorithm, Format, ResultReport, RunOptions};

fn write_problem(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crcount-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn crcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crcount")).args(args).output().unwrap()
}

const CONIC: &str = r#"{"degree": {"delta_d": 2}, "n": 4, "cross_ratios": [["x1","x2","x3","x4"]], "seed": 5}"#;

#[test]
fn json_report_echoes_the_problem() {
    let problem = parse_problem(CONIC).unwrap();
    let options = RunOptions {
        algorithm: Some(Algorithm::LatticePath),
        canonical: true,
        ..RunOptions::default()
    };
    let out = run_count(&problem, &options).unwrap();
    let json = emit(&out, Format::Json).unwrap();
    let report: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["count"], 8);
    assert!(report.get("timing_ms").is_none());
    let echoed = parse_problem(&report["problem"].to_string()).unwrap();
    assert_eq!(echoed, problem);
    let parsed: ResultReport = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.count, 8);
}

#[test]
fn canonical_output_is_reproducible() {
    let path = write_problem("reproducible.json", CONIC);
    let path = path.to_str().unwrap();
    let args = ["count", path, "--algorithm", "oracle", "--canonical"];
    let first = crcount(&args);
    let second = crcount(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn record_contributions_sum_to_the_count() {
    let problem = parse_problem(CONIC).unwrap();
    for algorithm in [Algorithm::Floor, Algorithm::LatticePath, Algorithm::Oracle] {
        let options = RunOptions {
            algorithm: Some(algorithm),
            ..RunOptions::default()
        };
        let report = run_count(&problem, &options).unwrap().report;
        let total: u64 = report.records.iter().map(|r| r.contribution).sum();
        assert_eq!(total, report.count, "{algorithm}");
    }
}

#[test]
fn cross_check_exits_cleanly_when_algorithms_agree() {
    let path = write_problem("cross.json", CONIC);
    let out = crcount(&["list", path.to_str().unwrap(), "--algorithm", "cross-check"]);
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("cross-check floor: 8"));
    assert!(text.contains("cross-check lattice-path: 8"));
    assert!(text.contains("cross-check oracle: 8"));
}

#[test]
fn validation_errors_exit_with_code_two() {
    let bad = [
        r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1","x2","e7","e10"]]}"#,
        r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1","x2","x3","x4"], ["x1","x2","x3","x5"]]}"#,
        r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1","x2","x1","e8"]]}"#,
        r#"{"degree": {"delta_d": 3}, "n": 7"#,
    ];
    for (i, text) in bad.iter().enumerate() {
        let path = write_problem(&format!("bad{i}.json"), text);
        let out = crcount(&["count", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(exit::VALIDATION), "{text}");
    }
    let out = crcount(&["count", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(exit::VALIDATION));
}

#[test]
fn inapplicable_floor_algorithm_is_explained() {
    let path = write_problem(
        "ends.json",
        r#"{"degree": {"delta_d": 2}, "n": 4, "cross_ratios": [["x1","x2","e1","e4"]]}"#,
    );
    let out = crcount(&["count", path.to_str().unwrap(), "--algorithm", "floor"]);
    assert_eq!(out.status.code(), Some(exit::VALIDATION));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("four marked points"), "{err}");
}

#[test]
fn oversized_oracle_problems_hit_the_resource_limit() {
    let path = write_problem("cubic.json", r#"{"degree": {"delta_d": 3}, "n": 8, "cross_ratios": []}"#);
    let out = crcount(&["count", path.to_str().unwrap(), "--algorithm", "oracle"]);
    assert_eq!(out.status.code(), Some(exit::RESOURCE_LIMIT));
}

#[test]
fn dot_export_has_one_graph_per_record() {
    let path = write_problem("dot.json", CONIC);
    let out = crcount(&["export", path.to_str().unwrap(), "--algorithm", "floor"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("digraph ").count(), 1);
    assert!(text.contains("s=1 |λ|=1"));
    assert!(text.contains("ω=1"));
    assert!(text.contains("thick"));
}

#[test]
fn check_lists_applicable_algorithms() {
    let path = write_problem(
        "check.json",
        r#"{"degree": {"delta_d": 3}, "n": 7, "cross_ratios": [["x1","x2","e7","e8"]]}"#,
    );
    let out = crcount(&["check", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lattice-path: applicable"));
    assert!(text.contains("four marked points"));
}

#[test]
fn polytope_degrees_cross_check_without_floor_diagrams() {
    let problem = parse_problem(
        r#"{"degree": {"polytope": {"vertices": [[0,0],[1,0],[1,1],[0,1]]}}, "n": 3, "cross_ratios": []}"#,
    )
    .unwrap();
    let options = RunOptions {
        algorithm: Some(Algorithm::CrossCheck),
        ..RunOptions::default()
    };
    let report = run_count(&problem, &options).unwrap().report;
    assert!(report.agrees());
    assert_eq!(report.count, 1);
    let skipped: Vec<_> = report.cross_check.iter().filter(|c| c.skipped.is_some()).collect();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0].algorithm, Algorithm::Floor);
}

#[test]
fn hirzebruch_degrees_agree_with_the_oracle() {
    let problem = parse_problem(
        r#"{"degree": {"hirzebruch": {"s": 1, "b": 1, "alpha": [1, 1], "beta": [1]}}, "n": 4, "cross_ratios": []}"#,
    )
    .unwrap();
    let options = RunOptions {
        algorithm: Some(Algorithm::CrossCheck),
        ..RunOptions::default()
    };
    let report = run_count(&problem, &options).unwrap().report;
    assert!(report.agrees());
    assert_eq!(report.cross_check.iter().filter(|c| c.count.is_some()).count(), 2);
}
