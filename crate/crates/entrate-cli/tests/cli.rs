//! End-to-end tests against the compiled binary: exit codes, JSON shapes,
//! budget precedence, and golden outputs on the bundled fixture problems.

use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigUint;

use entrate::majorization::MajorizationVerdict;
use entrate::rates::{CatalystReport, RateReport};
use entrate::rational::parse_rational;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn entrate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entrate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

#[test]
fn check_feasible_pair_exits_zero() {
    let out = entrate(&[
        "check",
        &fixture("four_level.json"),
        "--m",
        "8",
        "--n",
        "9",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let verdict: MajorizationVerdict = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(verdict.holds);
    assert!(verdict.witness.is_none());
}

#[test]
fn check_infeasible_pair_reports_the_witness() {
    let out = entrate(&[
        "check",
        &fixture("four_level.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 1);

    // Raw field names are part of the output contract.
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["holds"], serde_json::json!(false));
    assert_eq!(value["witness"]["l"], serde_json::json!("2"));
    assert_eq!(value["witness"]["lhs"], serde_json::json!("19/25"));
    assert_eq!(value["witness"]["rhs"], serde_json::json!("3/4"));

    // And the JSON round-trips into the library type.
    let verdict: MajorizationVerdict = serde_json::from_str(&stdout(&out)).unwrap();
    let w = verdict.witness.expect("witness present");
    assert_eq!(w.prefix_length, BigUint::from(2u32));
    assert_eq!(w.source_prefix_sum, parse_rational("19/25").unwrap());
    assert_eq!(w.target_prefix_sum, parse_rational("3/4").unwrap());
}

#[test]
fn check_oracle_flag_agrees_on_small_instances() {
    let feasible = entrate(&[
        "check",
        &fixture("four_level.json"),
        "--m",
        "2",
        "--n",
        "2",
        "--oracle",
    ]);
    assert_eq!(code(&feasible), 0, "stderr: {}", stderr(&feasible));

    let infeasible = entrate(&["check", &fixture("four_level.json"), "--oracle"]);
    assert_eq!(code(&infeasible), 1, "stderr: {}", stderr(&infeasible));
}

#[test]
fn malformed_spectrum_exits_two() {
    let out = entrate(&["check", &fixture("malformed.json")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error"), "stderr: {}", stderr(&out));
}

#[test]
fn missing_file_exits_two() {
    let out = entrate(&["rate", "/nonexistent/problem.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn zero_copies_is_a_usage_error() {
    let out = entrate(&["check", &fixture("four_level.json"), "--m", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn rate_reports_the_golden_lower_bound() {
    let out = entrate(&[
        "rate",
        &fixture("four_level.json"),
        "--m-max",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: RateReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.lower_bound, parse_rational("9/8").unwrap());
    assert!(report.upper_bound <= 1.1648, "{}", report.upper_bound);
    assert!(report.upper_bound >= 9.0 / 8.0 - 1e-9);
    assert_eq!(report.budget.m_max, 8);

    // Reserializing reproduces the exact same JSON: a full round trip.
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), value);
}

#[test]
fn rate_budget_comes_from_file_then_flag() {
    let from_file = entrate(&["rate", &fixture("budget_file.json"), "--format", "json"]);
    let report: RateReport = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(report.budget.m_max, 4);

    let from_flag = entrate(&[
        "rate",
        &fixture("budget_file.json"),
        "--m-max",
        "8",
        "--format",
        "json",
    ]);
    let report: RateReport = serde_json::from_str(&stdout(&from_flag)).unwrap();
    assert_eq!(report.budget.m_max, 8);
    assert_eq!(report.lower_bound, parse_rational("9/8").unwrap());
}

#[test]
fn rate_on_identical_pair_pins_one() {
    let out = entrate(&["rate", &fixture("identical.json"), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report: RateReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.lower_bound, parse_rational("1").unwrap());
    assert!((report.upper_bound - 1.0).abs() <= 1e-9);
}

#[test]
fn rate_defaults_to_json_when_piped() {
    // No --format flag: a captured (non-terminal) stdout selects JSON.
    let out = entrate(&["rate", &fixture("four_level.json"), "--m-max", "8"]);
    assert_eq!(code(&out), 0);
    let report: RateReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.lower_bound, parse_rational("9/8").unwrap());
}

#[test]
fn rate_table_format_prints_key_value_lines() {
    let out = entrate(&[
        "rate",
        &fixture("four_level.json"),
        "--m-max",
        "8",
        "--format",
        "table",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("lower bound: 9/8"), "{text}");
    assert!(text.contains("upper bound:"), "{text}");
}

#[test]
fn catalyst_supplied_in_file_is_verified() {
    let out = entrate(&[
        "catalyst",
        &fixture("four_level_catalyst.json"),
        "--m",
        "7",
        "--n",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: CatalystReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!report.plain_feasible);
    assert!(report.catalyst_feasible);
    let choice = report.catalyst.expect("supplied catalyst echoed back");
    assert_eq!(choice.copies, 4);
    assert!(report.search_space.is_none());
}

#[test]
fn catalyst_eleven_copies_converts_one_to_one() {
    let out = entrate(&[
        "catalyst",
        &fixture("five_level_catalyst.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: CatalystReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!report.plain_feasible);
    assert!(report.catalyst_feasible);
}

#[test]
fn catalyst_search_disabled_gives_plain_verdict_only() {
    let out = entrate(&[
        "catalyst",
        &fixture("four_level.json"),
        "--m",
        "7",
        "--n",
        "8",
        "--q-grid",
        "0",
        "--copies-max",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 1);
    let report: CatalystReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!report.plain_feasible);
    assert!(!report.catalyst_feasible);
    assert!(report.catalyst.is_none());
}

#[test]
fn catalyst_default_search_finds_one() {
    let out = entrate(&[
        "catalyst",
        &fixture("four_level.json"),
        "--m",
        "7",
        "--n",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: CatalystReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.catalyst_feasible);
    assert!(report.catalyst.is_some());
    assert!(report.search_space.is_some());
}

#[test]
fn pmax_prints_exact_rationals() {
    let k1 = entrate(&["pmax", &fixture("three_level.json")]);
    assert_eq!(code(&k1), 0);
    assert_eq!(stdout(&k1).trim(), "4/5");

    let k10 = entrate(&["pmax", &fixture("three_level.json"), "--k", "10"]);
    assert_eq!(stdout(&k10).trim(), "1048576/9765625");

    let certain = entrate(&["pmax", &fixture("two_level.json")]);
    assert_eq!(stdout(&certain).trim(), "1");
}

#[test]
fn renyi_order_two_matches_the_golden_ratio() {
    let out = entrate(&[
        "renyi",
        &fixture("four_level.json"),
        "--tau",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["tau"], serde_json::json!("2"));
    let ratio: f64 = value["ratio"].as_str().unwrap().parse().unwrap();
    assert!((ratio - 1.1643).abs() <= 5e-4, "{ratio}");
}

#[test]
fn renyi_shannon_matches_the_library() {
    let out = entrate(&[
        "renyi",
        &fixture("two_level.json"),
        "--tau",
        "1",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let source: f64 = value["source_entropy"].as_str().unwrap().parse().unwrap();
    let target: f64 = value["target_entropy"].as_str().unwrap().parse().unwrap();

    use entrate::entropy::{renyi, RenyiOrder};
    use entrate::spectrum::parse_spectrum;
    let a = parse_spectrum(&["7/10", "3/10"]).unwrap().to_grouped();
    let b = parse_spectrum(&["4/5", "1/5"]).unwrap().to_grouped();
    assert!((source - renyi(&a, RenyiOrder::One)).abs() <= 1e-11);
    assert!((target - renyi(&b, RenyiOrder::One)).abs() <= 1e-11);
}

#[test]
fn renyi_rejects_bad_orders() {
    for tau in ["-1", "bogus", ""] {
        let out = entrate(&["renyi", &fixture("two_level.json"), "--tau", tau]);
        assert_eq!(code(&out), 2, "tau = {tau:?}");
    }
}
