//! Black-box checks of the command-line binary: exit codes for each error
//! class, output determinism, and agreement between the text and JSON
//! renderings.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crn-toric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_corpus(pre: &[&str], file: &str, post: &[&str]) -> Output {
    let path = corpus_path(file);
    let mut args: Vec<String> = pre.iter().map(|s| s.to_string()).collect();
    args.push(path.to_string_lossy().into_owned());
    args.extend(post.iter().map(|s| s.to_string()));
    let strs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&strs)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("crn-cli-{}-{name}", std::process::id()));
    fs::write(&path, contents).expect("temp file written");
    path
}

#[test]
fn analyze_succeeds_with_exit_0() {
    let out = run_with_corpus(&["analyze"], "futile_cycle.crn", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("deficiency"), "summary mentions the deficiency");
    assert!(text.contains("cyclic"), "currents are classified");
}

#[test]
fn json_report_is_valid_and_matches_text_facts() {
    let out = run_with_corpus(&["analyze"], "futile_cycle.crn", &["--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["network"]["num_complexes"], 6);
    assert_eq!(v["network"]["num_linkage_classes"], 2);
    assert_eq!(v["network"]["deficiency"], 1);
    assert_eq!(v["generators"]["count"], 3);
    let kinds: Vec<&str> = v["generators"]["currents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["cyclic", "stoichiometric", "cyclic"]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let first = run_with_corpus(
        &["steady-states"],
        "futile_cycle.crn",
        &["--translation", corpus_path("futile_cycle.shift").to_str().unwrap(), "--json"],
    );
    let second = run_with_corpus(
        &["steady-states"],
        "futile_cycle.crn",
        &["--translation", corpus_path("futile_cycle.shift").to_str().unwrap(), "--json"],
    );
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "deterministic output");
}

#[test]
fn solve_pipeline_reports_solution() {
    let out = run_with_corpus(
        &["steady-states"],
        "futile_cycle.crn",
        &[
            "--translation",
            corpus_path("futile_cycle.shift").to_str().unwrap(),
            "--rates",
            corpus_path("futile_cycle_ones.rates").to_str().unwrap(),
            "--x0",
            corpus_path("futile_cycle.x0").to_str().unwrap(),
            "--solve",
            "--json",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert!(v["solution"].is_object(), "solution section present");
    let rel = v["verification"]["relative_residual_inf"]
        .as_f64()
        .expect("relative residual present");
    assert!(rel < 1e-8, "solved point is stationary, residual {rel:e}");
    assert_eq!(
        v["verification"]["decomposes"], true,
        "flux decomposes over the extreme currents"
    );
}

#[test]
fn usage_error_exits_1() {
    let out = run(&["analyze", "--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(1), "missing subcommand is a usage error");
}

#[test]
fn solve_without_inputs_exits_1() {
    let out = run_with_corpus(
        &["steady-states"],
        "futile_cycle.crn",
        &["--translation", corpus_path("futile_cycle.shift").to_str().unwrap(), "--solve"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--solve requires"));
}

#[test]
fn parse_error_exits_2() {
    let bad = temp_file("bad.crn", "network broken\n\nA -> ; k1\n");
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn enumeration_cap_exits_3() {
    let out = run_with_corpus(
        &["steady-states"],
        "futile_cycle.crn",
        &[
            "--translation",
            corpus_path("futile_cycle.shift").to_str().unwrap(),
            "--sign-dim-cap",
            "0",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fruitless_search_exits_4() {
    let out = run_with_corpus(&["translate"], "single_irreversible.crn", &["--search"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn failed_hypothesis_exits_5() {
    let shift = temp_file("zero.shift", "shift 1: 0\n");
    let out = run_with_corpus(
        &["steady-states"],
        "single_irreversible.crn",
        &["--translation", shift.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(5));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("weakly reversible"),
        "diagnostic names the failed hypothesis"
    );
}

#[test]
fn tree_constants_on_irreversible_network_exits_1() {
    // Outside the steady-state pipeline a non-weakly-reversible input means
    // the command does not apply, which is a usage-class failure.
    let out = run_with_corpus(&["tree-constants"], "single_irreversible.crn", &[]);
    assert_eq!(out.status.code(), Some(1));
}
