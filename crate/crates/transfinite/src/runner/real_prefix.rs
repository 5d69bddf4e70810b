//! Computing a real, one input at a time: run a register program with the
//! input preloaded in `R0` and read a bit from the output value.

use super::{Budget, RunOutcome, Runner};
use crate::machines::{initial_config, FamilySpec, MachineConfig, MachineError, Output};
use crate::oracle::Oracle;
use crate::programs::Program;
use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealPrefix {
    /// Bit `n` is `min(R0-at-halt, 1)` for the run with `R0 := n`.
    Bits(String),
    /// The first input whose run did not halt within budget.
    Failure { input: u64, outcome: RunOutcome },
}

/// Runs the program on inputs `0..n_max`, each under its own budget, and
/// assembles the length-`n_max` bit string.
pub fn compute_real_prefix(
    spec: &FamilySpec,
    program: &Program,
    oracle: &Oracle,
    n_max: u64,
    budget: &Budget,
) -> Result<RealPrefix, MachineError> {
    let runner = Runner::quiet();
    let mut bits = String::with_capacity(n_max as usize);
    for input in 0..n_max {
        let mut config = initial_config(spec, program)?;
        match &mut config {
            MachineConfig::Register(c) => c.registers[0] = BigUint::from(input),
            MachineConfig::Tape(_) => {
                return Err(MachineError::DialectMismatch {
                    family: spec.to_string(),
                    expected: crate::programs::Dialect::Register,
                    got: crate::programs::Dialect::Turing,
                })
            }
        }
        let (outcome, _) = runner.run_from(spec, program, oracle, budget, config, |_, _| {});
        match outcome {
            RunOutcome::Halted {
                output: Output::Natural(value),
                ..
            } => bits.push(if value.is_zero() { '0' } else { '1' }),
            RunOutcome::Halted { .. } => unreachable!("register programs output naturals"),
            other => {
                return Ok(RealPrefix::Failure {
                    input,
                    outcome: other,
                })
            }
        }
    }
    Ok(RealPrefix::Bits(bits))
}
