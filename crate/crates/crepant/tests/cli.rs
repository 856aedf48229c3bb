//! Black-box tests of the command-line interface: exit codes, the golden
//! JSON report, selftest determinism, and fault injection.

use std::path::PathBuf;
use std::process::{Command, Output};

use crepant::report::Report;

const BIN: &str = env!("CARGO_BIN_EXE_crepant");

fn write_job(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).expect("job file written");
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CREPANT_SELFTEST_FAULT")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

const TRANSVERSE: &str = r#"{
  "variables": ["s", "t"],
  "f": "s^2*t^2",
  "g": "s^3*t^3",
  "points": [[0, 0]],
  "divisors": ["s", "t"],
  "n_surfaces": 9
}
"#;

#[test]
fn resolve_emits_the_golden_json_report() {
    let job = write_job("transverse.json", TRANSVERSE);
    let output = run(&["resolve", "--input", job.to_str().unwrap(), "--json"]);
    assert_eq!(output.status.code(), Some(0));
    let golden = include_str!("golden/transverse_report.json");
    assert_eq!(stdout(&output), golden, "golden JSON drifted");
}

#[test]
fn json_reports_parse_back_into_the_same_report() {
    let job = write_job("roundtrip.json", TRANSVERSE);
    let output = run(&["resolve", "--input", job.to_str().unwrap(), "--json"]);
    let text = stdout(&output);
    let report: Report = serde_json::from_str(&text).expect("report parses");
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
}

#[test]
fn classify_prints_a_text_summary_by_default() {
    let job = write_job("classify.json", TRANSVERSE);
    let output = run(&["classify", "--input", job.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("non-Kodaira"), "{text}");
    assert!(text.contains("I0*"), "{text}");
}

#[test]
fn missing_input_file_exits_2() {
    let output = run(&["resolve", "--input", "/nonexistent/job.json"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn malformed_job_exits_2() {
    let job = write_job("malformed.json", r#"{"variables": ["s", "t"], "f": "s^4"}"#);
    let output = run(&["resolve", "--input", job.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unparseable_polynomial_exits_2() {
    let job = write_job(
        "badpoly.json",
        r#"{"variables": ["s", "t"], "f": "s^^4", "g": "t", "points": [[0, 0]]}"#,
    );
    let output = run(&["resolve", "--input", job.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn zero_discriminant_exits_3() {
    let job = write_job(
        "zerodisc.json",
        r#"{"variables": ["s", "t"], "f": "-3*s^2", "g": "2*s^3", "points": [[0, 0]]}"#,
    );
    let output = run(&["classify", "--input", job.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn non_isolated_point_exits_3_with_diagnostics_in_the_report() {
    let job = write_job(
        "noniso.json",
        r#"{"variables": ["s", "t"], "f": "s^4", "g": "s^6", "points": [[0, 0]]}"#,
    );
    let output = run(&["resolve", "--input", job.to_str().unwrap(), "--json"]);
    assert_eq!(output.status.code(), Some(3));
    let report: Report = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report.points[0].status.as_deref(), Some("not-isolated"));
    assert!(report.points[0]
        .isolation
        .as_ref()
        .unwrap()
        .failure
        .is_some());
}

#[test]
fn recursion_limit_override_exits_4() {
    let job = write_job(
        "tangent.json",
        r#"{"variables": ["s", "t"], "f": "(s - t^2)^2*(s + t^2)^2", "g": "(s - t^2)^3*(s + t^2)^3", "points": [[0, 0]]}"#,
    );
    let output = run(&[
        "resolve",
        "--input",
        job.to_str().unwrap(),
        "--recursion-limit",
        "1",
        "--json",
    ]);
    assert_eq!(output.status.code(), Some(4));
    let report: Report = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report.points[0].status.as_deref(), Some("recursion-limit"));

    // The same job under the default limit resolves cleanly.
    let output = run(&["resolve", "--input", job.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn kodaira_table_prints_standalone() {
    let output = run(&["--print-kodaira-table"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("I0*"));
    assert!(text.contains("II*"));
}

#[test]
fn selftest_passes_and_ignores_the_seed() {
    let first = run(&["selftest", "--seed", "1"]);
    let second = run(&["selftest", "--seed", "424242"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second), "selftest output varies with seed");
    assert!(stdout(&first).contains("all checks passed"));
}

#[test]
fn selftest_fault_injection_names_the_failing_check() {
    let output = Command::new(BIN)
        .args(["selftest"])
        .env("CREPANT_SELFTEST_FAULT", "kodaira-table")
        .output()
        .expect("binary runs");
    assert_ne!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(
        text.contains("kodaira-table-totality ... FAILED"),
        "failure names the check: {text}"
    );
}
