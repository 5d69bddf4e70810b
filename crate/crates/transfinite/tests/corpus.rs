//! Corpus conformance: every program parses, reformats to the same
//! program, produces its hand-derived outcome under every annotated
//! family, and lands its first limit jump on the hand-computed
//! configuration.

mod common;

use common::{first_limit_landing, load_corpus, run_check};
use transfinite::programs::{format_program, parse_program};
use transfinite::runner::verify_divergence;
use transfinite::RunOutcome;

#[test]
fn corpus_parses_and_roundtrips() {
    let cases = load_corpus();
    assert!(cases.len() >= 15);
    for case in &cases {
        let rendered = format_program(&case.program);
        let reparsed = parse_program(&rendered, case.program.dialect())
            .unwrap_or_else(|e| panic!("{}: reformatted text must parse: {e}", case.name));
        assert_eq!(reparsed, case.program, "{}: format/parse roundtrip", case.name);
    }
}

#[test]
fn corpus_outcomes_match_annotations() {
    for case in load_corpus() {
        for check in &case.checks {
            run_check(&case, check);
        }
    }
}

#[test]
fn corpus_divergence_certificates_replay() {
    for case in load_corpus() {
        for check in &case.checks {
            let outcome = run_check(&case, check);
            if let RunOutcome::Diverges {
                certificate,
                recurring,
            } = &outcome
            {
                assert!(
                    verify_divergence(
                        &check.family,
                        &case.program,
                        &check.oracle,
                        certificate,
                        recurring
                    ),
                    "{} under {}: certificate must replay",
                    case.name,
                    check.family
                );
            }
        }
    }
}

#[test]
fn corpus_limit_landings_match() {
    for case in load_corpus() {
        for lc in &case.limit_checks {
            let budget = common::default_budget();
            let landing =
                first_limit_landing(&lc.family, &case.program, &transfinite::Oracle::Zero, &budget)
                    .unwrap_or_else(|| {
                        panic!("{} under {}: no limit reached", case.name, lc.family)
                    });
            assert_eq!(landing.0, lc.time, "{}: first limit time", case.name);
            assert_eq!(landing.1, lc.rendering, "{}: limit configuration", case.name);
        }
    }
}
