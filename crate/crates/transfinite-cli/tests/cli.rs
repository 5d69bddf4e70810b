//! Golden tests for the CLI: deterministic, parseable output and the
//! documented exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn tfm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .to_string_lossy()
        .to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn ord_add_example() {
    let out = tfm(&["ord", "w*2+3", "+", "w^2+w"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "w^2+w\n");
}

#[test]
fn ord_operators() {
    for (lhs, op, rhs, want) in [
        ("w+1", "*", "2", "w*2+1\n"),
        ("2", "^", "w", "w\n"),
        ("w", "-", "w+5", "5\n"),
        ("w+1", "cmp", "w*2", "less\n"),
        ("w", "pair", "0", "w*2\n"),
        ("1+w", "cmp", "w", "equal\n"),
    ] {
        let out = tfm(&["ord", lhs, op, rhs]);
        assert!(out.status.success(), "{lhs} {op} {rhs}");
        assert_eq!(stdout(&out), want, "{lhs} {op} {rhs}");
    }
}

#[test]
fn ord_single_expression_normalizes() {
    let out = tfm(&["ord", "w^(w+1)*3+w*2+7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "w^(w+1)*3+w*2+7\n");
}

#[test]
fn ord_syntax_error_exits_2() {
    let out = tfm(&["ord", "w^"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("w^"), "diagnostic names the token: {err}");
}

#[test]
fn run_incloop_diverges() {
    let out = tfm(&[
        "run",
        "--family",
        "itrm",
        "--program",
        &corpus("incloop.tfm"),
        "--oracle",
        "zero",
        "--max-time",
        "w^2",
    ]);
    assert!(out.status.success(), "diverging runs exit 0");
    let text = stdout(&out);
    assert_eq!(
        text,
        "outcome: diverges\n\
         certificate: ramp[R0:+1] start=0 period=2\n\
         recurring: line=0 regs=0\n"
    );
}

#[test]
fn run_reset_halt_reports_exact_ordinal() {
    let out = tfm(&[
        "run",
        "--family",
        "itrm",
        "--program",
        &corpus("reset_halt.tfm"),
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "outcome: halted\ntime: w+2\noutput: 0\n"
    );
}

#[test]
fn run_witrm_undefined() {
    let out = tfm(&[
        "run",
        "--family",
        "witrm",
        "--program",
        &corpus("incloop.tfm"),
    ]);
    assert!(out.status.success(), "undefined runs exit 0");
    assert_eq!(
        stdout(&out),
        "outcome: undefined\ntime: w\nregister: R0\n"
    );
}

#[test]
fn run_is_deterministic_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let trace_a = dir.path().join("a.trace");
    let trace_b = dir.path().join("b.trace");
    let run = |path: &Path| {
        tfm(&[
            "run",
            "--family",
            "ittm",
            "--program",
            &corpus("mover.tfm"),
            "--trace",
            &path.to_string_lossy(),
            "--snapshot-every",
            "2",
        ])
    };
    let a = run(&trace_a);
    let b = run(&trace_b);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "byte-identical stdout");
    assert_eq!(
        stdout(&a),
        "outcome: halted\ntime: w+1\noutput: (1)*\n"
    );
    let ta = std::fs::read_to_string(&trace_a).unwrap();
    let tb = std::fs::read_to_string(&trace_b).unwrap();
    assert_eq!(ta, tb, "byte-identical traces");
    assert!(ta.lines().any(|l| l.contains("limit-jump")), "trace shows the jump");
    for line in ta.lines() {
        assert_eq!(line.split('\t').count(), 3, "trace lines are 3 tab-separated fields");
    }
}

#[test]
fn census_is_deterministic() {
    let args = [
        "census",
        "--family",
        "itrm",
        "--max-index",
        "40",
        "--max-time",
        "w^2",
        "--max-events",
        "10000",
    ];
    let a = tfm(&args);
    let b = tfm(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    assert!(text.starts_with("index\toutcome\tordinal\n"));
    assert!(text.contains("0\thalted\t1\n"), "program 0 is HALT: {text}");
    assert!(text.contains("# halting ordinals\n"));
}

#[test]
fn sample_reports_exact_rational() {
    let out = tfm(&[
        "sample",
        "--family",
        "itrm",
        "--program",
        &corpus("oracle_halt.tfm"),
        "--seed",
        "42",
        "--trials",
        "100",
        "--max-events",
        "1000",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("trials: 100\n"), "{text}");
    assert!(text.contains("frequency: "), "{text}");
    assert!(text.contains("seed: 42\n"), "{text}");
    let again = tfm(&[
        "sample",
        "--family",
        "itrm",
        "--program",
        &corpus("oracle_halt.tfm"),
        "--seed",
        "42",
        "--trials",
        "100",
        "--max-events",
        "1000",
    ]);
    assert_eq!(stdout(&again), text, "sampling is reproducible");
}

#[test]
fn unknown_family_exits_2() {
    let out = tfm(&[
        "run",
        "--family",
        "bogus",
        "--program",
        &corpus("halt.tfm"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("bogus"), "diagnostic names the family: {err}");
}

#[test]
fn unreadable_program_exits_2() {
    let out = tfm(&["run", "--family", "itrm", "--program", "/nonexistent.tfm"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dialect_mismatch_is_a_parse_error() {
    let out = tfm(&[
        "run",
        "--family",
        "ittm",
        "--program",
        &corpus("incloop.tfm"),
    ]);
    assert_eq!(out.status.code(), Some(2), "register text cannot parse as turing");
}
