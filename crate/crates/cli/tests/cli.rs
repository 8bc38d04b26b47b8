//! End-to-end tests of the `zetapos` binary: exit codes, report shapes,
//! format rendering, determinism across worker counts, and checkpointed
//! reruns.

use std::process::{Command, Output};

use serde_json::Value;

fn zetapos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetapos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid JSON on stdout")
}

#[test]
fn g2_verify_reports_two_distinguished_weightings() {
    let out = zetapos(&["verify", "--family", "G", "--rank", "2", "--format", "json"]);
    let report = stdout_json(&out);
    assert_eq!(report["theorem_holds"], Value::Bool(true));
    let weightings = report["weightings"].as_array().unwrap();
    assert_eq!(weightings.len(), 4);
    let distinguished = weightings
        .iter()
        .filter(|v| v["distinguished"] == Value::Bool(true))
        .count();
    assert_eq!(distinguished, 2);
    assert_eq!(report["totals"]["distinguished"], 2);
}

#[test]
fn a2_counterexamples_match_the_worked_example() {
    let out = zetapos(&[
        "counterexamples",
        "--family",
        "A",
        "--rank",
        "2",
        "--format",
        "json",
    ]);
    let rows = stdout_json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let row20 = rows.iter().find(|r| r["rho"] == "20").unwrap();
    assert_eq!(row20["word"], "");
    assert_eq!(row20["gamma_index"], 2);
    assert_eq!(row20["zeta"], serde_json::json!([2, -1]));
}

#[test]
fn b5_classify_tabulates_32_agreeing_weightings() {
    let out = zetapos(&[
        "classify", "--family", "B", "--rank", "5", "--format", "json",
    ]);
    let report = stdout_json(&out);
    let rows = report["weightings"].as_array().unwrap();
    assert_eq!(rows.len(), 32);
    assert!(rows
        .iter()
        .all(|r| r["distinguished"] == r["bala_carter"]));
    assert_eq!(report["classifiers_agree"], Value::Bool(true));
}

#[test]
fn json_reports_round_trip_and_keep_the_stable_field_names() {
    let out = zetapos(&[
        "verify", "--family", "B", "--rank", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let report: zetapos::Report = serde_json::from_str(&text).unwrap();
    let reparsed: zetapos::Report =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(reparsed, report);

    let raw: Value = serde_json::from_str(&text).unwrap();
    for key in ["family", "rank", "weightings", "theorem_holds", "totals"] {
        assert!(raw.get(key).is_some(), "missing {key}");
    }
    let failing = raw["weightings"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["outcome"] == "counterexample")
        .unwrap();
    for key in ["rho", "distinguished", "bala_carter", "outcome", "scanned", "wall_ms"] {
        assert!(failing.get(key).is_some(), "missing {key}");
    }
    for key in ["word", "gamma_index", "zeta"] {
        assert!(failing["counterexample"].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn worker_count_never_changes_the_report() {
    let args = |jobs: &'static str| {
        vec![
            "verify", "--family", "F", "--rank", "4", "--format", "json", "--jobs", jobs,
        ]
    };
    let mut serial = stdout_json(&zetapos(&args("1")));
    let mut parallel = stdout_json(&zetapos(&args("4")));
    for report in [&mut serial, &mut parallel] {
        report["totals"]["wall_ms"] = Value::from(0);
        for v in report["weightings"].as_array_mut().unwrap() {
            v["wall_ms"] = Value::from(0);
        }
    }
    assert_eq!(serial, parallel);
}

#[test]
fn usage_errors_exit_with_code_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--family", "B", "--rank", "3", "--mode", "fastest"],
        &["verify", "--family", "G", "--rank", "2", "--mode", "closedform"],
        &["verify", "--family", "B", "--rank", "3", "--rho", "22"],
        &["verify", "--family", "E", "--rank", "7"],
        &["verify", "--family", "Q", "--rank", "3"],
        &["crosscheck", "--family", "G", "--rank", "2"],
    ];
    for args in cases {
        let out = zetapos(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn out_flag_writes_the_report_to_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = zetapos(&[
        "verify",
        "--family",
        "A",
        "--rank",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: zetapos::Report =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.totals.weightings, 4);
}

#[test]
fn csv_and_text_formats_render_every_weighting() {
    let csv = zetapos(&["verify", "--family", "G", "--rank", "2", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "header plus one row per weighting");
    assert!(lines[0].starts_with("rho,distinguished,bala_carter,outcome"));

    let plain = zetapos(&["verify", "--family", "G", "--rank", "2", "--format", "text"]);
    assert!(plain.status.success());
    let text = String::from_utf8(plain.stdout).unwrap();
    assert!(text.ends_with("theorem_holds: true\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn single_weighting_verify_honors_checkpoints_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3.ckpt");
    let run = || {
        zetapos(&[
            "verify",
            "--family",
            "B",
            "--rank",
            "3",
            "--rho",
            "222",
            "--format",
            "json",
            "--split-depth",
            "2",
            "--checkpoint",
            path.to_str().unwrap(),
        ])
    };
    let mut first = stdout_json(&run());
    assert!(path.exists());
    let mut second = stdout_json(&run());
    for report in [&mut first, &mut second] {
        report["totals"]["wall_ms"] = Value::from(0);
        report["weightings"][0]["wall_ms"] = Value::from(0);
    }
    assert_eq!(first, second);
    assert_eq!(first["weightings"][0]["scanned"], 48);
}

#[test]
fn reduction_check_reports_all_properties() {
    let out = zetapos(&[
        "reduction-check",
        "--family",
        "C",
        "--rank",
        "3",
        "--format",
        "json",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["source_family"], "A");
    assert_eq!(report["source_rank"], 5);
    for key in ["positive", "root_surjective", "compatible", "score_identity_holds"] {
        assert_eq!(report[key], Value::Bool(true), "{key}");
    }
    assert_eq!(report["score_pairs_checked"], 8 * 48);
}
