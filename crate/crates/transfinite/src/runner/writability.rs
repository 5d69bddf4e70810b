//! Writability classification for infinite time Turing machine runs.
//!
//! - writable: the output-tape description at halting;
//! - eventually written: the description that stops changing at some
//!   traced time and never changes again within the budget (only a proof
//!   when the run halted);
//! - accidentally written: every distinct description observed at any
//!   traced time, up to a collection cap.

use super::{Budget, RunOutcome, Runner};
use crate::machines::{FamilySpec, MachineConfig, MachineError, Output};
use crate::oracle::Oracle;
use crate::ordinal::Ordinal;
use crate::programs::{Dialect, Program};

#[derive(Debug, Clone)]
pub struct WritabilityReport {
    pub outcome: RunOutcome,
    /// Halting output description, when the run halted.
    pub writable: Option<String>,
    /// Description and the time from which it never changed again.
    pub eventually_written: Option<(String, Ordinal)>,
    /// True when `eventually_written` is only stable within the budget,
    /// not proven stable forever.
    pub within_budget_only: bool,
    /// Distinct output descriptions in order of first appearance.
    pub accidentally_written: Vec<String>,
}

const ACCIDENTAL_CAP: usize = 256;

/// Classifies a turing program's output behavior under the ITTM semantics.
pub fn classify_writability(
    program: &Program,
    oracle: &Oracle,
    budget: &Budget,
) -> Result<WritabilityReport, MachineError> {
    if program.dialect() != Dialect::Turing {
        return Err(MachineError::DialectMismatch {
            family: "ittm".to_string(),
            expected: Dialect::Turing,
            got: program.dialect(),
        });
    }
    let spec = FamilySpec::Ittm;
    let runner = Runner::quiet();
    let mut current = String::new();
    let mut last_change = Ordinal::zero();
    let mut final_time = Ordinal::zero();
    let mut seen: Vec<String> = Vec::new();
    let (outcome, _) = runner.run_observed(&spec, program, oracle, budget, |time, config| {
        let desc = match config {
            MachineConfig::Tape(c) => c.output.describe(),
            MachineConfig::Register(_) => unreachable!("ittm runs turing programs"),
        };
        if time.is_zero() {
            seen.push(desc.clone());
            current = desc;
        } else if desc != current {
            if !seen.contains(&desc) && seen.len() < ACCIDENTAL_CAP {
                seen.push(desc.clone());
            }
            last_change = time.clone();
            current = desc;
        }
        final_time = time.clone();
    })?;

    let mut writable = None;
    if let RunOutcome::Halted { output, time } = &outcome {
        let desc = match output {
            Output::Tape(t) => t.describe(),
            Output::Natural(_) => unreachable!("turing programs output tapes"),
        };
        if desc != current {
            last_change = time.clone();
            current = desc.clone();
        }
        if !seen.contains(&desc) && seen.len() < ACCIDENTAL_CAP {
            seen.push(desc.clone());
        }
        final_time = time.clone();
        writable = Some(desc);
    }

    // Stable only if at least one event passed after the last change.
    let eventually = if last_change < final_time || writable.is_some() {
        Some((current.clone(), last_change.clone()))
    } else {
        None
    };
    Ok(WritabilityReport {
        within_budget_only: writable.is_none(),
        writable,
        eventually_written: eventually,
        accidentally_written: seen,
        outcome,
    })
}
