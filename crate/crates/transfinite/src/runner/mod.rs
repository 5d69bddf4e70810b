//! The transfinite execution engine.
//!
//! A run alternates successor steps with certified limit jumps. After each
//! event the detector looks for a cycle ending at the current
//! configuration; when one is certified, the clock advances to
//! `start + period * w` and the configuration becomes the cycle's limit
//! inferior. A limit configuration equal to the cycle start is a fixed
//! point: the machine provably recurs at every later limit of the cycle's
//! closure, so the run reports divergence with that certificate. Budgets
//! bound both the ordinal clock and the event count, and exhausting either
//! is an answer (`BudgetExceeded`), never an error.

use crate::machines::{
    initial_config, limit_of_cycle, successor_step, CycleEvidence, FamilySpec, LimitOutcome,
    MachineConfig, MachineError, Output, StepResult,
};
use crate::oracle::Oracle;
use crate::ordinal::Ordinal;
use crate::programs::Program;
use sha2::{Digest, Sha256};

mod census;
mod detect;
mod monte_carlo;
mod real_prefix;
mod writability;

pub use census::{halting_census, Census, CensusEntry};
pub use monte_carlo::{monte_carlo, FrequencyReport, Target};
pub use real_prefix::{compute_real_prefix, RealPrefix};
pub use writability::{classify_writability, WritabilityReport};

use detect::{detect, EventKind, Window};

/// Ordinal clock ceiling and event-count guard for a single run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_time: Ordinal,
    pub max_events: u64,
}

impl Budget {
    pub fn new(max_time: Ordinal, max_events: u64) -> Budget {
        assert!(!max_time.is_zero(), "max_time must be positive");
        assert!(max_events > 0, "max_events must be positive");
        Budget {
            max_time,
            max_events,
        }
    }

    /// Both bounds doubled, for budget-monotonicity checks.
    pub fn doubled(&self) -> Budget {
        Budget {
            max_time: self.max_time.mul(&Ordinal::from_nat(2u32)),
            max_events: self.max_events.saturating_mul(2),
        }
    }
}

/// What a run concluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// Halted at a successor ordinal with the dialect's output.
    Halted { time: Ordinal, output: Output },
    /// A certified configuration fixed point under the limit rule: the
    /// machine recurs forever and never halts.
    Diverges {
        certificate: CycleEvidence,
        recurring: MachineConfig,
    },
    /// Weak register machines only: a register's limit inferior was
    /// infinite at the given limit time.
    Undefined { time: Ordinal, register: usize },
    /// Neither bound was reached; the snapshot is the last configuration.
    BudgetExceeded {
        time_reached: Ordinal,
        snapshot: MachineConfig,
    },
}

impl RunOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            RunOutcome::Halted { .. } => "halted",
            RunOutcome::Diverges { .. } => "diverges",
            RunOutcome::Undefined { .. } => "undefined",
            RunOutcome::BudgetExceeded { .. } => "budget-exceeded",
        }
    }

    pub fn halting_time(&self) -> Option<&Ordinal> {
        match self {
            RunOutcome::Halted { time, .. } => Some(time),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEventKind {
    Step,
    LimitJump(CycleEvidence),
    Halt,
    Undefined { register: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub time: Ordinal,
    pub kind: TraceEventKind,
    /// Digest of the configuration after the event (before it, for Halt).
    pub digest: String,
}

/// Event log with optional configuration snapshots.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub snapshots: Vec<(Ordinal, MachineConfig)>,
}

impl Trace {
    /// Line-oriented rendering: `<ordinal>\t<event>\t<digest-or-full>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut snapshots = self.snapshots.iter().peekable();
        for event in &self.events {
            let kind = match &event.kind {
                TraceEventKind::Step => "step".to_string(),
                TraceEventKind::LimitJump(e) => format!("limit-jump[{}]", e.summary()),
                TraceEventKind::Halt => "halt".to_string(),
                TraceEventKind::Undefined { register } => format!("undefined[R{register}]"),
            };
            out.push_str(&format!("{}\t{kind}\t{}\n", event.time, event.digest));
            while let Some((t, c)) = snapshots.peek() {
                if t > &event.time {
                    break;
                }
                out.push_str(&format!("{t}\tsnapshot\t{c}\n"));
                snapshots.next();
            }
        }
        out
    }
}

pub fn config_digest(config: &MachineConfig) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config.to_string().as_bytes());
    let digest = hasher.finalize();
    hex_prefix(&digest, 8)
}

fn hex_prefix(bytes: &[u8], n: usize) -> String {
    bytes.iter().take(n).map(|b| format!("{b:02x}")).collect()
}

/// Execution options. The defaults fast-forward through limits with a
/// 10^4-entry detection window and verify every divergence certificate by
/// replay.
#[derive(Debug, Clone)]
pub struct Runner {
    pub fast_forward: bool,
    pub window_cap: usize,
    pub collect_trace: bool,
    /// Record a full configuration snapshot every this many events
    /// (0 disables snapshots).
    pub snapshot_every: u64,
    pub verify_certificates: bool,
}

impl Default for Runner {
    fn default() -> Self {
        Runner {
            fast_forward: true,
            window_cap: 10_000,
            collect_trace: true,
            snapshot_every: 0,
            verify_certificates: true,
        }
    }
}

impl Runner {
    /// Quiet options for bulk work: no trace, certificates still verified.
    pub fn quiet() -> Runner {
        Runner {
            collect_trace: false,
            ..Runner::default()
        }
    }

    /// The no-fast-forward reference stepper.
    pub fn naive() -> Runner {
        Runner {
            fast_forward: false,
            collect_trace: false,
            ..Runner::default()
        }
    }

    pub fn run(
        &self,
        spec: &FamilySpec,
        program: &Program,
        oracle: &Oracle,
        budget: &Budget,
    ) -> Result<(RunOutcome, Trace), MachineError> {
        self.run_observed(spec, program, oracle, budget, |_, _| {})
    }

    /// Like [`Runner::run`], with a callback invoked at time 0 and after
    /// every event with the clock and current configuration.
    pub fn run_observed(
        &self,
        spec: &FamilySpec,
        program: &Program,
        oracle: &Oracle,
        budget: &Budget,
        observer: impl FnMut(&Ordinal, &MachineConfig),
    ) -> Result<(RunOutcome, Trace), MachineError> {
        let config = initial_config(spec, program)?;
        Ok(self.run_from(spec, program, oracle, budget, config, observer))
    }

    /// Runs from an explicit starting configuration (used for preloaded
    /// inputs and certificate replays).
    pub fn run_from(
        &self,
        spec: &FamilySpec,
        program: &Program,
        oracle: &Oracle,
        budget: &Budget,
        config: MachineConfig,
        mut observer: impl FnMut(&Ordinal, &MachineConfig),
    ) -> (RunOutcome, Trace) {
        let mut engine = Engine::new(self, spec, program, oracle, config, false);
        let outcome = engine.run(budget, &mut observer);
        (outcome, engine.trace)
    }
}

struct Engine<'a> {
    opts: &'a Runner,
    spec: &'a FamilySpec,
    program: &'a Program,
    oracle: &'a Oracle,
    window: Window,
    clock: Ordinal,
    config: MachineConfig,
    events: u64,
    trace: Trace,
    /// Replay mode: a certified fixed point is jumped through instead of
    /// reported, so a replay can cross the limit it is checking.
    divergence_as_jump: bool,
}

impl<'a> Engine<'a> {
    fn new(
        opts: &'a Runner,
        spec: &'a FamilySpec,
        program: &'a Program,
        oracle: &'a Oracle,
        config: MachineConfig,
        divergence_as_jump: bool,
    ) -> Self {
        let mut engine = Engine {
            opts,
            spec,
            program,
            oracle,
            window: Window::new(opts.window_cap),
            clock: Ordinal::zero(),
            config,
            events: 0,
            trace: Trace::default(),
            divergence_as_jump,
        };
        if engine.opts.fast_forward {
            engine.window.push(
                0,
                Ordinal::zero(),
                engine.config.clone(),
                EventKind::Step,
            );
        }
        engine
    }

    fn budget_exceeded(&self) -> RunOutcome {
        RunOutcome::BudgetExceeded {
            time_reached: self.clock.clone(),
            snapshot: self.config.clone(),
        }
    }

    fn trace_event(&mut self, kind: TraceEventKind, time: &Ordinal) {
        if !self.opts.collect_trace {
            return;
        }
        self.trace.events.push(TraceEvent {
            time: time.clone(),
            kind,
            digest: config_digest(&self.config),
        });
        if self.opts.snapshot_every > 0 && self.events % self.opts.snapshot_every == 0 {
            self.trace.snapshots.push((time.clone(), self.config.clone()));
        }
    }

    /// Pushes the current configuration into the detection window. Large
    /// configurations are snapshotted at a stride to bound copying; jump
    /// landings are always recorded because they anchor nested cycles.
    fn push_window(&mut self, kind: EventKind) -> bool {
        if !self.opts.fast_forward {
            return false;
        }
        if kind == EventKind::Step {
            let weight = self.config.weight();
            if weight > 512 {
                let stride = (weight / 512) as u64 + 1;
                if self.events % stride != 0 {
                    self.window.note_skip(self.events);
                    return false;
                }
            }
        }
        self.window
            .push(self.events, self.clock.clone(), self.config.clone(), kind);
        true
    }

    fn run(
        &mut self,
        budget: &Budget,
        observer: &mut impl FnMut(&Ordinal, &MachineConfig),
    ) -> RunOutcome {
        observer(&self.clock, &self.config);
        loop {
            if self.events >= budget.max_events {
                return self.budget_exceeded();
            }
            let next_time = self.clock.successor();
            if next_time >= budget.max_time {
                return self.budget_exceeded();
            }
            match successor_step(self.spec, &mut self.config, self.program, self.oracle) {
                StepResult::Halted(output) => {
                    self.trace_event(TraceEventKind::Halt, &next_time);
                    return RunOutcome::Halted {
                        time: next_time,
                        output,
                    };
                }
                StepResult::Next => {
                    self.clock = next_time;
                    self.events += 1;
                    self.trace_event(TraceEventKind::Step, &self.clock.clone());
                    let recorded = self.push_window(EventKind::Step);
                    observer(&self.clock, &self.config);
                    if recorded {
                        if let Some(outcome) = self.fast_forward(budget, observer) {
                            return outcome;
                        }
                    }
                }
            }
        }
    }

    /// Applies as many certified limit jumps as the configuration stream
    /// supports right now. Returns a final outcome when the run ends here.
    fn fast_forward(
        &mut self,
        budget: &Budget,
        observer: &mut impl FnMut(&Ordinal, &MachineConfig),
    ) -> Option<RunOutcome> {
        loop {
            let detection = detect(
                &self.window,
                self.program,
                self.oracle,
                self.spec.is_register(),
            )?;
            let entries = self
                .window
                .slice(detection.start_id, detection.end_id)
                .expect("detection only cites densely recorded stretches");
            let period_configs: Vec<&MachineConfig> =
                entries.iter().map(|e| &e.config).collect();
            let end_config = &self
                .window
                .get(detection.end_id)
                .expect("detection cites live entries")
                .config;
            let limit = limit_of_cycle(
                self.spec,
                self.program,
                &detection.evidence,
                &period_configs,
                end_config,
            );
            let start_config = &period_configs[0];
            let target = detection
                .evidence
                .start_time
                .add(&detection.evidence.period.mul(&Ordinal::omega()));
            match limit {
                LimitOutcome::UndefinedRegister(register) => {
                    if target >= budget.max_time {
                        return Some(self.budget_exceeded());
                    }
                    self.trace_event(TraceEventKind::Undefined { register }, &target);
                    return Some(RunOutcome::Undefined {
                        time: target,
                        register,
                    });
                }
                LimitOutcome::Config(limit_config) => {
                    if &&limit_config == start_config && !self.divergence_as_jump {
                        let certificate = detection.evidence.clone();
                        if self.opts.verify_certificates {
                            let ok = verify_divergence(
                                self.spec,
                                self.program,
                                self.oracle,
                                &certificate,
                                &limit_config,
                            );
                            assert!(
                                ok,
                                "divergence certificate failed replay verification: {}",
                                certificate.summary()
                            );
                        }
                        return Some(RunOutcome::Diverges {
                            certificate,
                            recurring: limit_config,
                        });
                    }
                    if self.events >= budget.max_events {
                        return Some(self.budget_exceeded());
                    }
                    if target >= budget.max_time {
                        return Some(self.budget_exceeded());
                    }
                    self.clock = target;
                    self.config = limit_config;
                    self.events += 1;
                    self.trace_event(
                        TraceEventKind::LimitJump(detection.evidence.clone()),
                        &self.clock.clone(),
                    );
                    self.push_window(EventKind::Jump);
                    observer(&self.clock, &self.config);
                }
            }
        }
    }

    /// Steps and jumps until the clock reads exactly `target`; fails on
    /// halting, going undefined, overshooting, or exhausting `max_events`.
    fn run_to_time(&mut self, target: &Ordinal, max_events: u64) -> Option<MachineConfig> {
        loop {
            if &self.clock == target {
                return Some(self.config.clone());
            }
            if self.clock > *target || self.events >= max_events {
                return None;
            }
            match successor_step(self.spec, &mut self.config, self.program, self.oracle) {
                StepResult::Halted(_) => return None,
                StepResult::Next => {
                    self.clock = self.clock.successor();
                    self.events += 1;
                    if self.push_window(EventKind::Step) && !self.replay_jumps(target, max_events)
                    {
                        return None;
                    }
                }
            }
        }
    }

    /// Applies the limit jumps a replay re-derives, stopping at `target`.
    /// Returns false on a hard failure (an undefined limit mid-replay).
    fn replay_jumps(&mut self, target: &Ordinal, max_events: u64) -> bool {
        loop {
            if &self.clock >= target || self.events >= max_events {
                return true;
            }
            let Some(detection) = detect(
                &self.window,
                self.program,
                self.oracle,
                self.spec.is_register(),
            ) else {
                return true;
            };
            let Some(entries) = self.window.slice(detection.start_id, detection.end_id) else {
                return true;
            };
            let period_configs: Vec<&MachineConfig> =
                entries.iter().map(|e| &e.config).collect();
            let Some(end_entry) = self.window.get(detection.end_id) else {
                return true;
            };
            let limit = limit_of_cycle(
                self.spec,
                self.program,
                &detection.evidence,
                &period_configs,
                &end_entry.config,
            );
            let jump_to = detection
                .evidence
                .start_time
                .add(&detection.evidence.period.mul(&Ordinal::omega()));
            match limit {
                LimitOutcome::UndefinedRegister(_) => return false,
                LimitOutcome::Config(limit_config) => {
                    if &jump_to > target {
                        // Jumping would overshoot; let stepping continue.
                        return true;
                    }
                    self.clock = jump_to;
                    self.config = limit_config;
                    self.events += 1;
                    self.push_window(EventKind::Jump);
                }
            }
        }
    }
}

/// Replays one full closure period from a certified fixed point: starting
/// from `recurring`, the machine must reach clock delta `period * w` in
/// the same configuration. This is the automatic soundness check behind
/// every `Diverges` outcome.
pub fn verify_divergence(
    spec: &FamilySpec,
    program: &Program,
    oracle: &Oracle,
    certificate: &CycleEvidence,
    recurring: &MachineConfig,
) -> bool {
    let opts = Runner {
        collect_trace: false,
        verify_certificates: false,
        ..Runner::default()
    };
    let mut engine = Engine::new(&opts, spec, program, oracle, recurring.clone(), true);
    let target = certificate.period.mul(&Ordinal::omega());
    let cap = 1 << 22;
    match engine.run_to_time(&target, cap) {
        Some(config) => &config == recurring,
        None => false,
    }
}
