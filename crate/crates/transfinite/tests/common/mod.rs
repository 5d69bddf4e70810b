//! Shared harness for integration tests: corpus loading, annotation
//! parsing, and expectation checking.
//!
//! Corpus files carry machine-checkable annotations in `#@` comments:
//!
//! ```text
//! #@ <family> halts <ordinal> [output=<desc>] [oracle=<desc>] [events=<n>] [time=<ordinal>]
//! #@ <family> diverges [oracle=...] [events=...] [time=...]
//! #@ <family> undefined <ordinal> R<k> [oracle=...]
//! #@ <family> budget [oracle=...] [events=...]
//! #@ <family> limit <ordinal> <expected configuration rendering>
//! ```

use std::path::{Path, PathBuf};
use transfinite::machines::MachineConfig;
use transfinite::oracle::Oracle;
use transfinite::ordinal::{parse_ordinal, Ordinal};
use transfinite::programs::{parse_program, sniff_dialect, Program};
use transfinite::runner::{Budget, RunOutcome, Runner};
use transfinite::FamilySpec;

pub fn default_budget() -> Budget {
    Budget::new(parse_ordinal("w^3").unwrap(), 200_000)
}

#[derive(Debug, Clone)]
pub enum Expect {
    Halts { time: Ordinal, output: Option<String> },
    Diverges,
    Undefined { time: Ordinal, register: usize },
    Budget,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub family: FamilySpec,
    pub oracle: Oracle,
    pub budget: Budget,
    pub expect: Expect,
}

#[derive(Debug, Clone)]
pub struct LimitCheck {
    pub family: FamilySpec,
    pub time: Ordinal,
    pub rendering: String,
}

pub struct CorpusCase {
    pub path: PathBuf,
    pub name: String,
    pub program: Program,
    pub checks: Vec<Check>,
    pub limit_checks: Vec<LimitCheck>,
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load_corpus() -> Vec<CorpusCase> {
    let mut cases = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory exists")
        .map(|e| e.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "tfm"))
        .collect();
    paths.sort();
    assert!(paths.len() >= 15, "corpus holds at least 15 programs");
    for path in paths {
        let text = std::fs::read_to_string(&path).expect("readable corpus file");
        let dialect = sniff_dialect(&text);
        let program = parse_program(&text, dialect)
            .unwrap_or_else(|e| panic!("{} must parse: {e}", path.display()));
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let mut checks = Vec::new();
        let mut limit_checks = Vec::new();
        for line in text.lines() {
            let Some(rest) = line.trim().strip_prefix("#@") else {
                continue;
            };
            parse_annotation(rest.trim(), &mut checks, &mut limit_checks)
                .unwrap_or_else(|e| panic!("{}: bad annotation `{rest}`: {e}", path.display()));
        }
        assert!(
            !checks.is_empty(),
            "{} carries at least one outcome annotation",
            path.display()
        );
        cases.push(CorpusCase {
            path,
            name,
            program,
            checks,
            limit_checks,
        });
    }
    cases
}

fn parse_annotation(
    text: &str,
    checks: &mut Vec<Check>,
    limit_checks: &mut Vec<LimitCheck>,
) -> Result<(), String> {
    let mut words = text.split_whitespace();
    let family = FamilySpec::parse(words.next().ok_or("missing family")?)
        .map_err(|e| e.to_string())?;
    let kind = words.next().ok_or("missing outcome kind")?;
    if kind == "limit" {
        let time = parse_ordinal(words.next().ok_or("missing limit time")?)
            .map_err(|e| e.to_string())?;
        let rendering = words.collect::<Vec<_>>().join(" ");
        limit_checks.push(LimitCheck {
            family,
            time,
            rendering,
        });
        return Ok(());
    }
    let mut expect = match kind {
        "halts" => Expect::Halts {
            time: parse_ordinal(words.next().ok_or("missing halting ordinal")?)
                .map_err(|e| e.to_string())?,
            output: None,
        },
        "diverges" => Expect::Diverges,
        "undefined" => {
            let time = parse_ordinal(words.next().ok_or("missing limit ordinal")?)
                .map_err(|e| e.to_string())?;
            let reg = words.next().ok_or("missing register")?;
            let register = reg
                .strip_prefix('R')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| format!("bad register `{reg}`"))?;
            Expect::Undefined { time, register }
        }
        "budget" => Expect::Budget,
        other => return Err(format!("unknown outcome `{other}`")),
    };
    let mut oracle = Oracle::Zero;
    let mut budget = default_budget();
    for word in words {
        if let Some(v) = word.strip_prefix("output=") {
            if let Expect::Halts { output, .. } = &mut expect {
                *output = Some(v.to_string());
            } else {
                return Err("output= only applies to halts".to_string());
            }
        } else if let Some(v) = word.strip_prefix("oracle=") {
            oracle = Oracle::parse(v).map_err(|e| e.to_string())?;
        } else if let Some(v) = word.strip_prefix("events=") {
            budget.max_events = v.parse().map_err(|_| format!("bad events `{v}`"))?;
        } else if let Some(v) = word.strip_prefix("time=") {
            budget.max_time = parse_ordinal(v).map_err(|e| e.to_string())?;
        } else {
            return Err(format!("unknown field `{word}`"));
        }
    }
    checks.push(Check {
        family,
        oracle,
        budget,
        expect,
    });
    Ok(())
}

/// Runs one annotated check and asserts the outcome matches. Returns the
/// outcome for further use.
pub fn run_check(case: &CorpusCase, check: &Check) -> RunOutcome {
    let runner = Runner::quiet();
    let (outcome, _) = runner
        .run(&check.family, &case.program, &check.oracle, &check.budget)
        .unwrap_or_else(|e| panic!("{} under {}: {e}", case.name, check.family));
    assert_outcome(&case.name, &check.family, &check.expect, &outcome);
    outcome
}

pub fn assert_outcome(
    name: &str,
    family: &FamilySpec,
    expect: &Expect,
    outcome: &RunOutcome,
) {
    let label = format!("{name} under {family}");
    match (expect, outcome) {
        (Expect::Halts { time, output }, RunOutcome::Halted { time: t, output: o }) => {
            assert_eq!(t, time, "{label}: halting ordinal");
            if let Some(want) = output {
                assert_eq!(&o.description(), want, "{label}: output");
            }
        }
        (Expect::Diverges, RunOutcome::Diverges { .. }) => {}
        (
            Expect::Undefined { time, register },
            RunOutcome::Undefined {
                time: t,
                register: r,
            },
        ) => {
            assert_eq!(t, time, "{label}: undefined time");
            assert_eq!(r, register, "{label}: undefined register");
        }
        (Expect::Budget, RunOutcome::BudgetExceeded { .. }) => {}
        (want, got) => panic!("{label}: expected {want:?}, got {}", got.kind()),
    }
}

/// Observes a run and returns the first configuration reached at a limit
/// ordinal time, falling back to the divergence certificate's recurrence.
pub fn first_limit_landing(
    family: &FamilySpec,
    program: &Program,
    oracle: &Oracle,
    budget: &Budget,
) -> Option<(Ordinal, String)> {
    let runner = Runner::quiet();
    let mut landing: Option<(Ordinal, String)> = None;
    let (outcome, _) = runner
        .run_observed(family, program, oracle, budget, |time, config| {
            if landing.is_none() && time.is_limit() {
                landing = Some((time.clone(), config.to_string()));
            }
        })
        .ok()?;
    if landing.is_none() {
        if let RunOutcome::Diverges {
            certificate,
            recurring,
        } = &outcome
        {
            let target = certificate
                .start_time
                .add(&certificate.period.mul(&Ordinal::omega()));
            landing = Some((target, recurring.to_string()));
        }
    }
    landing
}

/// Renders a configuration the way limit annotations expect.
pub fn render_config(config: &MachineConfig) -> String {
    config.to_string()
}

// ----------------------------------------------------------------------
// Naive/fast-forward equivalence checking.
//
// The fast-forwarding runner materializes every finite time up to its
// first limit jump; beyond that, its certificate *is* its claim about the
// remaining finite times: exact repeats predict periodicity, ramps predict
// an affine register law, translations predict a shifted delta stream.
// The checker steps the no-fast-forward reference runner through every
// finite time up to `max_events` and verifies the materialized prefix and
// the certificate law configuration-for-configuration.

use transfinite::machines::{CycleKind, TmConfig};
use transfinite::runner::TraceEventKind;

/// One step's effect on a tape configuration, for O(1) law checking.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TapeDelta {
    state: usize,
    head: Ordinal,
    written_pos: Ordinal,
    scratch_bit: bool,
    output_bit: bool,
}

fn tape_delta(prev: &TmConfig, cur: &TmConfig) -> TapeDelta {
    TapeDelta {
        state: cur.state,
        head: cur.head.clone(),
        written_pos: prev.head.clone(),
        scratch_bit: cur.scratch.get_at(&prev.head),
        output_bit: cur.output.get_at(&prev.head),
    }
}

fn shift_delta(d: &TapeDelta, shift: u64) -> TapeDelta {
    let shift = Ordinal::from_nat(shift);
    TapeDelta {
        state: d.state,
        head: d.head.add(&shift),
        written_pos: d.written_pos.add(&shift),
        scratch_bit: d.scratch_bit,
        output_bit: d.output_bit,
    }
}

/// Full shifted-tape comparison anchoring a translation law: `after`
/// equals `before` with everything from `lo` on moved up by `shift`.
fn assert_shifted_tape(
    label: &str,
    before: &TmConfig,
    after: &TmConfig,
    fill_from: &Ordinal,
    shift: u64,
    bound: u64,
) {
    let (base, lo) = transfinite::machines::split_position(fill_from);
    for (tape_b, tape_a, which) in [
        (&before.scratch, &after.scratch, "scratch"),
        (&before.output, &after.output, "output"),
    ] {
        for y in 0..lo {
            assert_eq!(
                tape_a.get(&base, y),
                tape_b.get(&base, y),
                "{label}: {which} below the sweep at {y}"
            );
        }
        for y in (lo + shift)..=(bound + shift) {
            assert_eq!(
                tape_a.get(&base, y),
                tape_b.get(&base, y - shift),
                "{label}: {which} shift law at {y}"
            );
        }
        assert!(
            tape_b.equal_outside_block(tape_a, &base),
            "{label}: {which} outside the swept block"
        );
    }
}

/// Steps the reference runner through every finite time `<= max_events`
/// and checks it against the fast-forwarding runner's materialized prefix
/// and first-certificate law.
pub fn check_naive_equivalence(
    label: &str,
    family: &FamilySpec,
    program: &Program,
    oracle: &Oracle,
    max_events: u64,
) {
    let budget = Budget::new(parse_ordinal("w^3").unwrap(), max_events);

    // Fast-forward pass: materialized finite-time configurations plus the
    // first certificate, if any.
    let ff = Runner {
        collect_trace: true,
        ..Runner::default()
    };
    let mut prefix: Vec<MachineConfig> = Vec::new();
    let (ff_outcome, ff_trace) = ff
        .run_observed(family, program, oracle, &budget, |time, config| {
            if time.is_finite() {
                prefix.push(config.clone());
            }
        })
        .unwrap_or_else(|e| panic!("{label}: {e}"));
    let mut law = ff_trace.events.iter().find_map(|e| match &e.kind {
        TraceEventKind::LimitJump(ev) => Some(ev.clone()),
        _ => None,
    });
    if law.is_none() {
        if let RunOutcome::Diverges { certificate, .. } = &ff_outcome {
            law = Some(certificate.clone());
        }
    }
    // Only a certificate anchored at finite times constrains finite times.
    let law = law.filter(|ev| {
        ev.start_time.is_finite() && ev.period.is_finite()
    });
    let (law_start, law_period) = match &law {
        Some(ev) => (
            u64::try_from(&ev.start_time.finite_part()).unwrap(),
            u64::try_from(&ev.period.finite_part()).unwrap(),
        ),
        None => (0, 0),
    };

    // Reference pass.
    let naive = Runner::naive();
    let mut t: u64 = 0;
    let mut ring: Vec<MachineConfig> = Vec::new(); // last `period` configs
    let mut delta_ring: Vec<Option<TapeDelta>> = Vec::new();
    let mut prev_config: Option<MachineConfig> = None;
    let mut anchor_config: Option<MachineConfig> = None;
    let (naive_outcome, _) = naive
        .run_observed(family, program, oracle, &budget, |time, config| {
            assert!(time.is_finite(), "reference runner stays at finite times");
            // Materialized prefix must agree exactly.
            if (t as usize) < prefix.len() {
                assert_eq!(
                    config, &prefix[t as usize],
                    "{label}: prefix mismatch at time {t}"
                );
            }
            if let Some(ev) = &law {
                let p = law_period as usize;
                match &ev.kind {
                    CycleKind::ExactRepeat => {
                        if t >= law_start + law_period {
                            assert_eq!(
                                config,
                                &ring[(t as usize) % p],
                                "{label}: exact-repeat law at time {t}"
                            );
                        }
                    }
                    CycleKind::RegisterRamp { increments, .. } => {
                        if t >= law_start + law_period {
                            let prev = ring[(t as usize) % p].as_register();
                            let cur = config.as_register();
                            assert_eq!(
                                cur.line, prev.line,
                                "{label}: ramp line law at time {t}"
                            );
                            for (r, inc) in increments.iter().enumerate() {
                                assert_eq!(
                                    cur.registers[r],
                                    &prev.registers[r] + inc,
                                    "{label}: ramp register law at time {t}, R{r}"
                                );
                            }
                        }
                    }
                    CycleKind::HeadTranslation {
                        shift, fill_from, ..
                    } => {
                        if t == law_start {
                            anchor_config = Some(config.clone());
                        }
                        if t == law_start + law_period {
                            let before = anchor_config.as_ref().unwrap().as_tape();
                            assert_shifted_tape(
                                label,
                                before,
                                config.as_tape(),
                                fill_from,
                                *shift,
                                law_start + law_period + *shift + 2,
                            );
                        }
                        if t >= 1 {
                            let delta =
                                tape_delta(prev_config.as_ref().unwrap().as_tape(), config.as_tape());
                            if t >= law_start + law_period + 1 {
                                let lagged = delta_ring[(t as usize) % p]
                                    .as_ref()
                                    .expect("lagged delta recorded");
                                assert_eq!(
                                    delta,
                                    shift_delta(lagged, *shift),
                                    "{label}: translation delta law at time {t}"
                                );
                            }
                            if p > 0 {
                                if delta_ring.len() < p {
                                    delta_ring.resize(p, None);
                                }
                                delta_ring[(t as usize) % p] = Some(delta);
                            }
                        }
                        prev_config = Some(config.clone());
                    }
                }
                if p > 0 && !matches!(ev.kind, CycleKind::HeadTranslation { .. }) {
                    if ring.len() < p {
                        ring.resize(p, config.clone());
                    }
                    ring[(t as usize) % p] = config.clone();
                }
            }
            t += 1;
        })
        .unwrap_or_else(|e| panic!("{label}: {e}"));

    // A finite halt must be bit-identical across the two runners.
    if let RunOutcome::Halted { time, output } = &naive_outcome {
        match &ff_outcome {
            RunOutcome::Halted {
                time: ff_time,
                output: ff_output,
            } => {
                assert_eq!(time, ff_time, "{label}: halting time");
                assert_eq!(output, ff_output, "{label}: halting output");
            }
            other => panic!(
                "{label}: reference halted at {time} but fast-forward said {}",
                other.kind()
            ),
        }
    }
}

