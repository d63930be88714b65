//! End-to-end tests for the `srank` binary: subcommand behavior, exit codes,
//! schema validity of JSON reports, and determinism of the results section.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn srank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn nf_prints_normal_form() {
    let out = srank(&["nf", fixture("F2_3.cmon").to_str().unwrap(), "-e", "5a"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("a + 2 b"));
}

#[test]
fn eq_decides_and_asserts() {
    let file = fixture("F2_3.cmon");
    let f = file.to_str().unwrap();
    let out = srank(&["eq", f, "-e", "5a", "-e", "a + 2b"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("equal"));

    let out = srank(&["eq", f, "-e", "b", "-e", "2a", "--assert"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("distinct"));
}

#[test]
fn sr_pins_fixture_values() {
    let out = srank(&[
        "sr",
        fixture("F2_5.cmon").to_str().unwrap(),
        "-e",
        "a",
        "--radius",
        "16",
        "--assert",
        "5",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("sr = 5"));

    let out = srank(&[
        "sr",
        fixture("F1.cmon").to_str().unwrap(),
        "-e",
        "w",
        "--assert",
        "inf",
    ]);
    assert!(out.status.success());
}

#[test]
fn sr_assert_failure_exits_one() {
    let out = srank(&[
        "sr",
        fixture("F2_3.cmon").to_str().unwrap(),
        "-e",
        "a",
        "--assert",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sr_accepts_user_refutation_targets() {
    // sr(3a) = 2 in the unit-tail fixture; the shipped truncation table is
    // accepted as an extra refutation target and the value still pins
    let file = fixture("F4_5.cmon");
    let refuter = fixture("F4_5_refuter.ctab");
    let out = srank(&[
        "sr",
        file.to_str().unwrap(),
        "-e",
        "3a",
        "--radius",
        "16",
        "--refuter",
        refuter.to_str().unwrap(),
        "--assert",
        "2",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn sr_unresolved_verdict_exits_three() {
    // sr(a) = 4 here, so capping the level scan at 2 leaves the bracket open
    let out = srank(&[
        "sr",
        fixture("F5.cmon").to_str().unwrap(),
        "-e",
        "a",
        "--level-cap",
        "2",
        "--require-verdict",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}

#[test]
fn input_errors_exit_two() {
    let out = srank(&["nf", "no_such_file.cmon", "-e", "a"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = std::env::temp_dir().join("srank_cli_bad_input");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.cmon");
    std::fs::write(&bad, "gens a; rel a = ;").unwrap();
    let out = srank(&["nf", bad.to_str().unwrap(), "-e", "a"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("syntax error"), "{err}");
}

#[test]
fn json_reports_validate_against_schema() {
    let schema_text = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json"),
    )
    .unwrap();
    let schema: serde_json::Value = serde_json::from_str(&schema_text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();

    let f23 = fixture("F2_3.cmon");
    let f6 = fixture("F6.ctab");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["nf", f23.to_str().unwrap(), "-e", "5a", "--json"],
        vec![
            "eq",
            f23.to_str().unwrap(),
            "-e",
            "5a",
            "-e",
            "a + 2b",
            "--json",
        ],
        vec!["complete", f23.to_str().unwrap(), "--json"],
        vec!["finite", f23.to_str().unwrap(), "--cap", "16", "--json"],
        vec!["grade", f23.to_str().unwrap(), "--json"],
        vec!["sr", f23.to_str().unwrap(), "-e", "a", "--json"],
        vec!["props", f23.to_str().unwrap(), "--radius", "8", "--json"],
        vec![
            "quotient",
            f6.to_str().unwrap(),
            "--kind",
            "power-some",
            "--set",
            "2",
            "--json",
        ],
        vec!["suite", "--fixture", "F1", "--json"],
    ];
    for args in invocations {
        let out = srank(&args);
        assert!(out.status.success(), "{args:?}: {}", stdout(&out));
        let value: serde_json::Value =
            serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let errors: Vec<String> = validator
            .iter_errors(&value)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn results_are_bit_identical_across_runs() {
    let file = fixture("F2_3.cmon");
    let args = ["sr", file.to_str().unwrap(), "-e", "a", "--json"];
    let a: serde_json::Value = serde_json::from_str(&stdout(&srank(&args))).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&srank(&args))).unwrap();
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["input_digest"], b["input_digest"]);
    assert_eq!(a["parameters"], b["parameters"]);
}

#[test]
fn suite_single_fixture_passes() {
    let out = srank(&["suite", "--fixture", "F6"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("all green"));
}

#[test]
fn suite_reports_are_deterministic() {
    let args = ["suite", "--fixtures-only", "--json"];
    let a: serde_json::Value = serde_json::from_str(&stdout(&srank(&args))).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&srank(&args))).unwrap();
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn suite_rejects_unknown_fixture() {
    let out = srank(&["suite", "--fixture", "F99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quotient_accepts_finite_presentations() {
    // a presentation that closes to {0, a, 2a} quotients like the table
    let dir = std::env::temp_dir().join("srank_cli_quotient");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("torsion.cmon");
    std::fs::write(&file, "gens a; rel 3 a = a;").unwrap();
    let out = srank(&["quotient", file.to_str().unwrap(), "--kind", "max-antisym"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("2 classes"));
}

#[test]
fn thread_cap_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_srank"))
        .env("SRANK_THREADS", "1")
        .args(["suite", "--fixture", "F1"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn certificates_in_sr_report_are_marked_verified() {
    let out = srank(&[
        "sr",
        fixture("F3.cmon").to_str().unwrap(),
        "-e",
        "a",
        "--json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["results"]["sr"]["audit"]["all_verified"], true);
    assert!(
        value["results"]["sr"]["audit"]["certificates"]
            .as_u64()
            .unwrap()
            >= 1
    );
    assert_eq!(value["results"]["sr"]["pinned"], "2");
}
