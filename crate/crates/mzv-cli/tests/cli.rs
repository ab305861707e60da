//! End-to-end tests of the `mzv` binary: output formats, exit codes,
//! JSON reports, and the DOT metadata round-trip.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mzv_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mzv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .expect("stdin is piped")
        .write_all(input.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated normally")
}

fn report_of(out: &Output) -> serde_json::Value {
    let text = stdout_of(out);
    let last = text.lines().last().expect("report line present");
    serde_json::from_str(last).expect("report is JSON")
}

#[test]
fn transpose_matches_the_known_example_and_is_an_involution() {
    let out = mzv(&["transpose", "2,3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "1,2,1,1\n");

    let back = mzv(&["transpose", "1,2,1,1"]);
    assert_eq!(stdout_of(&back), "2,3\n");
}

#[test]
fn fsum_prints_exact_rationals() {
    let out = mzv(&["fsum", "2,1", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "11/54\n");

    let pinned_at_one = mzv(&["fsum", "2,1,1", "1"]);
    assert_eq!(stdout_of(&pinned_at_one), "1\n");
}

#[test]
fn duality_check_passes_and_reports_json() {
    let out = mzv(&["duality-check", "--kmax", "4", "--nmax", "6"]);
    assert_eq!(code(&out), 0);
    let report = report_of(&out);
    assert_eq!(report["cases"], 90);
    assert_eq!(report["passed"], 90);
    assert_eq!(report["failed"], 0);
    assert_eq!(report["first_failure"], serde_json::Value::Null);
}

#[test]
fn zigzag_check_passes() {
    let out = mzv(&["zigzag-check", "--kmax", "3", "--nmax", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report_of(&out)["failed"], 0);
}

#[test]
fn verbose_batteries_log_cases_to_stderr() {
    let out = mzv(&["duality-check", "--kmax", "2", "--nmax", "2", "--verbose"]);
    assert_eq!(code(&out), 0);
    let log = stderr_of(&out);
    assert!(log.contains("PASS k=(1) N=1"));
    assert!(log.contains("PASS k=(1,1) N=2"));
    // stdout stays pure JSON
    assert!(stdout_of(&out).starts_with('{'));
}

#[test]
fn decompose_zigzag_two_one_gives_twice_zeta_two_one() {
    let out = mzv(&["decompose", "--zigzag", "2,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "[{\"index\":[2,1],\"coeff\":\"2/1\"}]\n");
}

#[test]
fn decompose_chain_recovers_the_plain_zeta_value() {
    let out = mzv(&["decompose", "--chain", "3,1"]);
    assert_eq!(stdout_of(&out), "[{\"index\":[3,1],\"coeff\":\"1/1\"}]\n");
}

#[test]
fn decompose_rejects_non_admissible_posets() {
    let out = mzv(&["decompose", "--zigzag", "1,2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("not admissible"));
}

#[test]
fn index_parse_errors_are_distinct_and_exit_two() {
    let empty = mzv(&["transpose", ""]);
    assert_eq!(code(&empty), 2);
    assert!(stderr_of(&empty).contains("index text is empty"));

    let zero = mzv(&["transpose", "2,0"]);
    assert_eq!(code(&zero), 2);
    assert!(stderr_of(&zero).contains("index parts must be positive"));

    let malformed = mzv(&["transpose", "2,x"]);
    assert_eq!(code(&malformed), 2);
    assert!(stderr_of(&malformed).contains("malformed index part \"x\""));
}

#[test]
fn usage_errors_exit_two() {
    let unknown_flag = mzv(&["transpose", "--bogus", "2"]);
    assert_eq!(code(&unknown_flag), 2);

    let missing_source = mzv(&["decompose"]);
    assert_eq!(code(&missing_source), 2);

    let two_sources = mzv(&["decompose", "--zigzag", "2", "--chain", "2"]);
    assert_eq!(code(&two_sources), 2);

    let huge_battery = mzv(&["duality-check", "--kmax", "99"]);
    assert_eq!(code(&huge_battery), 2);
    assert!(stderr_of(&huge_battery).contains("--kmax must be between"));
}

#[test]
fn star_relation_emits_the_euler_and_sum_formula_relations() {
    let euler = mzv(&["star-relation", "2,1"]);
    assert_eq!(code(&euler), 0);
    assert_eq!(
        stdout_of(&euler),
        "[{\"index\":[2,1],\"coeff\":\"1/1\"},{\"index\":[3],\"coeff\":\"-1/1\"}]\n"
    );

    let sum_formula = mzv(&["star-relation", "3,1"]);
    assert_eq!(
        stdout_of(&sum_formula),
        "[{\"index\":[2,2],\"coeff\":\"1/1\"},{\"index\":[3,1],\"coeff\":\"1/1\"},{\"index\":[4],\"coeff\":\"-1/1\"}]\n"
    );
}

fn eval_value_and_bound(args: &[&str]) -> (f64, f64) {
    let out = mzv(args);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_of(&out));
    let json: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).expect("JSON");
    let value: f64 = json["value"].as_str().expect("value").parse().expect("f64");
    let bound: f64 = json["error_bound"]
        .as_str()
        .expect("bound")
        .parse()
        .expect("f64");
    (value, bound)
}

#[test]
fn eval_confirms_euler_within_the_reported_bounds() {
    let (double, double_bound) = eval_value_and_bound(&["eval", "2,1", "--trunc", "100000"]);
    let (single, single_bound) = eval_value_and_bound(&["eval", "3", "--trunc", "100000"]);
    assert!((double - single).abs() <= double_bound + single_bound);
    assert!((double - 1.202).abs() < 2e-3);
}

#[test]
fn eval_reads_a_combination_from_stdin() {
    let relation = stdout_of(&mzv(&["star-relation", "3,1"]));
    let out = mzv_stdin(&["eval", "-", "--trunc", "10000", "--digits", "10"], &relation);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).expect("JSON");
    let value: f64 = json["value"].as_str().unwrap().parse().unwrap();
    let bound: f64 = json["error_bound"].as_str().unwrap().parse().unwrap();
    // the derived relation is a representation of zero
    assert!(value.abs() <= bound);
}

#[test]
fn eval_rejects_missing_files_and_bad_digit_counts() {
    let missing = mzv(&["eval", "no-such-file.json"]);
    assert_eq!(code(&missing), 2);
    assert!(stderr_of(&missing).contains("cannot read"));

    let digits = mzv(&["eval", "2", "--digits", "0"]);
    assert_eq!(code(&digits), 2);
}

#[test]
fn verify_families_report_success() {
    for args in [
        &["verify", "ak", "--k", "2", "--n", "3"][..],
        &["verify", "mt", "--ks", "1,1", "--k", "2"][..],
        &["verify", "kmt", "--p", "2", "--q", "1", "--r", "1"][..],
        &["verify", "kmt", "--q", "2", "--r", "1"][..],
    ] {
        let out = mzv(args);
        assert_eq!(code(&out), 0, "args: {args:?}, stderr: {}", stderr_of(&out));
        let report = report_of(&out);
        assert_eq!(report["failed"], 0, "args: {args:?}");
        assert_eq!(report["first_failure"], serde_json::Value::Null);
    }
}

#[test]
fn verify_mt_with_divergent_series_is_a_usage_error() {
    let out = mzv(&["verify", "mt", "--ks", "1,1", "--k", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("diverges"));
}

#[test]
fn verify_kmt_show_steps_prints_json_lines_then_the_report() {
    let out = mzv(&["verify", "kmt", "--p", "2", "--q", "1", "--r", "1", "--show-steps"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 3, "steps plus report expected");

    let step: serde_json::Value = serde_json::from_str(lines[0]).expect("step JSON");
    assert_eq!(step["step"], 1);
    assert_eq!(step["pair"], serde_json::json!(["q1", "r1"]));
    assert!(step["poset"]["vertices"].is_array());
    assert!(step["decomposition"].is_array());
    assert!(step["with_first_below"]["poset"]["covers"].is_array());

    let term: serde_json::Value = serde_json::from_str(lines[1]).expect("term JSON");
    assert_eq!(term["sum"], 1);
    assert_eq!(term["multiplicity"], "1");
    assert!(term["reduced_poset"]["labels"].is_object());

    let report: serde_json::Value =
        serde_json::from_str(lines.last().expect("report")).expect("report JSON");
    assert_eq!(report["failed"], 0);
}

#[test]
fn export_dot_metadata_round_trips_through_decompose() {
    let dot = stdout_of(&mzv(&["export-dot", "--zigzag", "3,1"]));
    let metadata = dot
        .lines()
        .next()
        .expect("first line")
        .strip_prefix("// poset-json: ")
        .expect("metadata sidecar present")
        .to_string();

    let via_metadata = mzv_stdin(&["decompose", "-"], &metadata);
    assert_eq!(code(&via_metadata), 0);
    let direct = mzv(&["decompose", "--zigzag", "3,1"]);
    assert_eq!(stdout_of(&via_metadata), stdout_of(&direct));
    assert_eq!(
        stdout_of(&direct),
        "[{\"index\":[2,2],\"coeff\":\"1/1\"},{\"index\":[3,1],\"coeff\":\"2/1\"}]\n"
    );
}

#[test]
fn export_dot_draws_labels_as_filled_and_hollow_nodes() {
    let dot = stdout_of(&mzv(&["export-dot", "--chain", "2"]));
    assert!(dot.contains("digraph"));
    assert!(dot.contains("fillcolor=black"));
    assert!(dot.contains("fillcolor=white"));
}

#[test]
fn stdout_is_byte_identical_across_runs() {
    let args = &["verify", "kmt", "--p", "2", "--q", "2,1", "--r", "1", "--show-steps"];
    let first = mzv(args);
    let second = mzv(args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn jobs_flag_does_not_change_the_output() {
    let serial = mzv(&["eval", "2,1", "--trunc", "50000"]);
    let parallel = mzv(&["eval", "2,1", "--trunc", "50000", "--jobs", "4"]);
    assert_eq!(serial.stdout, parallel.stdout);

    let zero = mzv(&["eval", "2", "--jobs", "0"]);
    assert_eq!(code(&zero), 2);
}
