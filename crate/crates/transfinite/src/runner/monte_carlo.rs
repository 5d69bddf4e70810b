//! Monte Carlo estimation of halting/output frequency over sampled
//! pseudorandom oracles.
//!
//! Trial `i` runs the program against `Pseudorandom { trial_seed(seed, i) }`,
//! so the whole experiment is a pure function of its arguments. Frequencies
//! are exact rationals; this is an empirical exploration tool, not a
//! measure computation.

use super::{Budget, RunOutcome, Runner};
use crate::machines::{FamilySpec, MachineError};
use crate::oracle::{trial_seed, Oracle};
use num_bigint::BigUint;
use num_rational::Ratio;

/// What counts as a successful trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// Any halting run matches.
    AnyHalt,
    /// The halting output's canonical description must equal this string
    /// (decimal `R0` for register programs, tape description for turing
    /// programs).
    Description(String),
}

impl Target {
    pub fn parse(text: &str) -> Target {
        if text == "any" {
            Target::AnyHalt
        } else {
            Target::Description(text.to_string())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyReport {
    pub trials: u64,
    pub halted: u64,
    pub matched_target: u64,
    pub diverged: u64,
    pub undefined: u64,
    pub budget_exceeded: u64,
    pub sampler_seed: u64,
    /// `matched_target / trials`, exact.
    pub frequency: Ratio<BigUint>,
}

impl FrequencyReport {
    /// Decimal rendering of the frequency, truncated to `places` digits.
    pub fn frequency_decimal(&self, places: u32) -> String {
        let scale = BigUint::from(10u32).pow(places);
        let scaled = self.frequency.numer() * &scale / self.frequency.denom();
        let whole = &scaled / &scale;
        let frac = &scaled % &scale;
        format!("{whole}.{frac:0places$}", places = places as usize)
    }
}

/// Runs `trials` independent seeded-oracle trials and counts halts and
/// target matches. Reproducible: equal arguments give equal reports.
pub fn monte_carlo(
    spec: &FamilySpec,
    program: &crate::programs::Program,
    target: &Target,
    sampler_seed: u64,
    trials: u64,
    budget: &Budget,
) -> Result<FrequencyReport, MachineError> {
    assert!(trials >= 1, "at least one trial");
    let runner = Runner::quiet();
    let mut halted = 0u64;
    let mut matched = 0u64;
    let mut diverged = 0u64;
    let mut undefined = 0u64;
    let mut exceeded = 0u64;
    for trial in 0..trials {
        let oracle = Oracle::Pseudorandom {
            seed: trial_seed(sampler_seed, trial),
        };
        let (outcome, _) = runner.run(spec, program, &oracle, budget)?;
        match outcome {
            RunOutcome::Halted { output, .. } => {
                halted += 1;
                let hit = match target {
                    Target::AnyHalt => true,
                    Target::Description(want) => &output.description() == want,
                };
                if hit {
                    matched += 1;
                }
            }
            RunOutcome::Diverges { .. } => diverged += 1,
            RunOutcome::Undefined { .. } => undefined += 1,
            RunOutcome::BudgetExceeded { .. } => exceeded += 1,
        }
    }
    Ok(FrequencyReport {
        trials,
        halted,
        matched_target: matched,
        diverged,
        undefined,
        budget_exceeded: exceeded,
        sampler_seed,
        frequency: Ratio::new(BigUint::from(matched), BigUint::from(trials)),
    })
}
