//! Golden tests: every committed log replays to exactly the committed
//! output, and the error paths report line numbers with the right exit
//! codes.

use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dynrank")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/logs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_stdout(args: &[&str], expected: &str) {
    let out = run(args);
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected, "args: {args:?}");
}

#[test]
fn matrix_rank_golden() {
    assert_stdout(
        &["run", &fixture("matrix_basic.log"), "--mode", "matrix"],
        "rank 2\n",
    );
}

#[test]
fn matrix_rank_golden_json() {
    assert_stdout(
        &["run", &fixture("matrix_basic.log"), "--mode", "matrix", "--json"],
        "{\"op\":\"rank?\",\"step\":3,\"result\":2}\n",
    );
}

#[test]
fn matrix_rank_paper_primes() {
    assert_stdout(
        &[
            "run",
            &fixture("matrix_basic.log"),
            "--mode",
            "matrix",
            "--primes",
            "paper",
        ],
        "rank 2\n",
    );
}

#[test]
fn reach_golden() {
    assert_stdout(
        &["run", &fixture("reach_basic.log"), "--mode", "reach"],
        "true\nfalse\n",
    );
}

#[test]
fn twosat_golden() {
    assert_stdout(
        &["run", &fixture("twosat_basic.log"), "--mode", "2sat"],
        "false\n",
    );
}

#[test]
fn allpairs_golden() {
    assert_stdout(
        &["run", &fixture("allpairs_basic.log"), "--mode", "allpairs"],
        "true\nfalse\ntrue\nfalse\n",
    );
}

#[test]
fn rpq_goldens() {
    assert_stdout(
        &[
            "run",
            &fixture("rpq_any_then_a.log"),
            "--mode",
            "rpq",
            "--nfa",
            &fixture("any_then_a.nfa"),
        ],
        "true\nfalse\n",
    );
    assert_stdout(
        &[
            "run",
            &fixture("rpq_a_bstar_a.log"),
            "--mode",
            "rpq",
            "--nfa",
            &fixture("a_bstar_a.nfa"),
        ],
        "true\nfalse\n",
    );
}

#[test]
fn matching_golden() {
    assert_stdout(
        &[
            "run",
            &fixture("matching_basic.log"),
            "--mode",
            "matching",
            "--seed",
            "7",
        ],
        "size 2\ntrue\nsize 1\nfalse\n",
    );
}

#[test]
fn check_invariants_passes_on_goldens() {
    for (log, mode) in [
        ("matrix_basic.log", "matrix"),
        ("reach_basic.log", "reach"),
        ("twosat_basic.log", "2sat"),
        ("allpairs_basic.log", "allpairs"),
        ("matching_basic.log", "matching"),
    ] {
        let out = run(&["run", &fixture(log), "--mode", mode, "--check-invariants"]);
        assert!(out.status.success(), "{log} failed under --check-invariants");
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    for (log, mode, line) in [
        ("bad_bound.log", "matrix", "line 2"),
        ("bad_op.log", "matrix", "line 2"),
        ("bad_index.log", "reach", "line 2"),
    ] {
        let out = run(&["run", &fixture(log), "--mode", mode]);
        assert_eq!(out.status.code(), Some(1), "{log} should exit 1");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(line), "{log}: stderr was `{stderr}`");
    }
}

#[test]
fn rpq_without_nfa_is_usage_error() {
    let out = run(&["run", &fixture("rpq_any_then_a.log"), "--mode", "rpq"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--nfa"));
}

#[test]
fn missing_file_is_io_error() {
    let out = run(&["run", "no_such_file.log", "--mode", "matrix"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_reports_have_expected_shape() {
    let out = run(&[
        "bench",
        &fixture("bench_matrix_small.log"),
        "--mode",
        "matrix",
        "--prime",
        "13",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("updates 60\n"), "got: {text}");
    assert!(text.contains("ratio "));

    let out = run(&[
        "bench",
        &fixture("bench_reach_small.log"),
        "--mode",
        "reach",
        "--json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"updates\":42"), "got: {text}");
    assert!(text.contains("\"query_mean_us\""));
}

#[test]
fn bench_empty_log_reports_zero_updates() {
    assert_stdout(
        &["bench", &fixture("bench_empty.log"), "--mode", "matrix"],
        "updates 0\nincremental_mean_us 0.000\nscratch_mean_us 0.000\nratio 0.00\nqueries 0\nquery_mean_us 0.000\n",
    );
}

#[test]
fn bench_rejects_unsupported_modes_and_bad_primes() {
    let out = run(&["bench", &fixture("twosat_basic.log"), "--mode", "2sat"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "bench",
        &fixture("bench_matrix_small.log"),
        "--mode",
        "matrix",
        "--prime",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
