//! Halting census: run an enumeration prefix of programs, each against the
//! same oracle and budget, and tabulate outcomes and exact halting
//! ordinals. The multiset of halting ordinals is the desk-scale picture of
//! halting-time structure for the dialect.

use super::{Budget, RunOutcome, Runner};
use crate::machines::{FamilySpec, MachineError};
use crate::oracle::Oracle;
use crate::programs::enumerate_program;
use crate::ordinal::Ordinal;
use num_bigint::BigUint;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub index: u64,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub family: FamilySpec,
    pub entries: Vec<CensusEntry>,
}

impl Census {
    /// Tab-separated table `index\toutcome\tordinal`, followed by the
    /// multiset of halting ordinals.
    pub fn render(&self) -> String {
        let mut out = String::from("index\toutcome\tordinal\n");
        let mut multiset: BTreeMap<Ordinal, u64> = BTreeMap::new();
        for entry in &self.entries {
            let ordinal = match entry.outcome.halting_time() {
                Some(t) => {
                    *multiset.entry(t.clone()).or_default() += 1;
                    t.to_string()
                }
                None => "-".to_string(),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                entry.index,
                entry.outcome.kind(),
                ordinal
            ));
        }
        out.push_str("# halting ordinals\n");
        for (ordinal, count) in &multiset {
            out.push_str(&format!("{ordinal}\t{count}\n"));
        }
        out
    }
}

/// Runs `enumerate_program(i)` for `i < max_index` under the family's
/// dialect. Deterministic: rerunning yields an identical census.
pub fn halting_census(
    spec: &FamilySpec,
    max_index: u64,
    oracle: &Oracle,
    budget: &Budget,
) -> Result<Census, MachineError> {
    let runner = Runner::quiet();
    let mut entries = Vec::with_capacity(max_index as usize);
    for index in 0..max_index {
        let program = enumerate_program(&BigUint::from(index), spec.dialect());
        let (outcome, _) = runner.run(spec, &program, oracle, budget)?;
        entries.push(CensusEntry { index, outcome });
    }
    Ok(Census {
        family: spec.clone(),
        entries,
    })
}
