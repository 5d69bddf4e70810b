//! Per-family machine semantics: successor steps and limit rules.
//!
//! Register families (`wITRM`, `ITRM`) run register programs; tape families
//! (`ITTM`, `alpha`-TM, `OTM`) run turing programs. Successor steps are the
//! ordinary small-step semantics. Limit configurations are computed from a
//! certified cycle: every component takes the smallest value it assumes
//! cofinally often, which for an exactly repeating cycle is the minimum
//! over one period. The families differ in what they do when a register's
//! limit inferior is infinite (`ITRM` resets to 0, `wITRM` is undefined)
//! and in how state and head behave at limits (`ITTM` enters its limit
//! state at head 0; `alpha`-TM and `OTM` take limit inferiors of the state
//! index and head position).

use crate::oracle::Oracle;
use crate::ordinal::Ordinal;
use crate::programs::{Dialect, Move, Program, ProgramBody, RegInstr, RegisterProgram, TuringTable};
use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt;

mod tape;

pub use tape::{split_position, Tape};

/// Which machine runs the program, plus the tape bound where one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// Weak (unresetting) infinite time register machine.
    WItrm,
    /// Resetting infinite time register machine.
    Itrm,
    /// Infinite time Turing machine: tape length `w`, special limit state.
    Ittm,
    /// Turing machine with tape length `alpha > w`.
    AlphaTm { tape_length: Ordinal },
    /// Ordinal Turing machine: unbounded tape.
    Otm,
}

impl FamilySpec {
    /// Validates an `alpha`-TM tape length: it must exceed `w` and be a
    /// limit ordinal, so that a head can never step off the right edge.
    pub fn alpha(tape_length: Ordinal) -> Result<FamilySpec, MachineError> {
        if tape_length <= Ordinal::omega() {
            return Err(MachineError::BadTapeLength(format!(
                "alpha tape length must exceed w, got {tape_length}"
            )));
        }
        if !tape_length.is_limit() {
            return Err(MachineError::BadTapeLength(format!(
                "alpha tape length must be a limit ordinal, got {tape_length}"
            )));
        }
        Ok(FamilySpec::AlphaTm { tape_length })
    }

    pub fn dialect(&self) -> Dialect {
        match self {
            FamilySpec::WItrm | FamilySpec::Itrm => Dialect::Register,
            _ => Dialect::Turing,
        }
    }

    pub fn is_register(&self) -> bool {
        self.dialect() == Dialect::Register
    }

    /// CLI spelling: `witrm | itrm | ittm | alpha:<ordinal> | otm`.
    pub fn parse(text: &str) -> Result<FamilySpec, MachineError> {
        match text {
            "witrm" => Ok(FamilySpec::WItrm),
            "itrm" => Ok(FamilySpec::Itrm),
            "ittm" => Ok(FamilySpec::Ittm),
            "otm" => Ok(FamilySpec::Otm),
            other => {
                if let Some(rest) = other.strip_prefix("alpha:") {
                    let len = crate::ordinal::parse_ordinal(rest).map_err(|e| {
                        MachineError::BadTapeLength(format!("bad tape length `{rest}`: {e}"))
                    })?;
                    FamilySpec::alpha(len)
                } else {
                    Err(MachineError::UnknownFamily(other.to_string()))
                }
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::WItrm => write!(f, "witrm"),
            FamilySpec::Itrm => write!(f, "itrm"),
            FamilySpec::Ittm => write!(f, "ittm"),
            FamilySpec::AlphaTm { tape_length } => write!(f, "alpha:{tape_length}"),
            FamilySpec::Otm => write!(f, "otm"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("family {family} runs {expected} programs, got a {got} program")]
    DialectMismatch {
        family: String,
        expected: Dialect,
        got: Dialect,
    },
    #[error("{0}")]
    BadTapeLength(String),
    #[error("unknown family `{0}` (expected witrm|itrm|ittm|alpha:<ordinal>|otm)")]
    UnknownFamily(String),
}

/// Register machine configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RmConfig {
    pub line: usize,
    pub registers: Vec<BigUint>,
}

/// Tape machine configuration. `scratch` is read/write, `output` is the
/// write-only tape mirrored by `out`-flagged transitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TmConfig {
    pub state: usize,
    pub head: Ordinal,
    pub scratch: Tape,
    pub output: Tape,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MachineConfig {
    Register(RmConfig),
    Tape(TmConfig),
}

impl MachineConfig {
    pub fn as_register(&self) -> &RmConfig {
        match self {
            MachineConfig::Register(c) => c,
            MachineConfig::Tape(_) => panic!("expected a register configuration"),
        }
    }

    pub fn as_tape(&self) -> &TmConfig {
        match self {
            MachineConfig::Tape(c) => c,
            MachineConfig::Register(_) => panic!("expected a tape configuration"),
        }
    }

    /// Rough size, used to throttle snapshotting of large configurations.
    pub fn weight(&self) -> usize {
        match self {
            MachineConfig::Register(c) => c.registers.len(),
            MachineConfig::Tape(c) => c.scratch.weight() + c.output.weight() + 1,
        }
    }

    /// Control location: program line or state index.
    pub fn location(&self) -> usize {
        match self {
            MachineConfig::Register(c) => c.line,
            MachineConfig::Tape(c) => c.state,
        }
    }
}

impl fmt::Display for MachineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineConfig::Register(c) => {
                write!(f, "line={} regs=", c.line)?;
                for (i, r) in c.registers.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                Ok(())
            }
            MachineConfig::Tape(c) => write!(
                f,
                "state={} head={} scratch={} output={}",
                c.state,
                c.head,
                c.scratch.describe(),
                c.output.describe()
            ),
        }
    }
}

/// What a halting run outputs: `R0` for register machines, the output tape
/// for tape machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Natural(BigUint),
    Tape(Tape),
}

impl Output {
    /// Canonical one-line rendering, also used for target matching.
    pub fn description(&self) -> String {
        match self {
            Output::Natural(n) => n.to_string(),
            Output::Tape(t) => t.describe(),
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.description())
    }
}

/// Result of one successor step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Next,
    Halted(Output),
}

/// Line 0 / start state, registers zero, tapes empty, head 0.
pub fn initial_config(spec: &FamilySpec, program: &Program) -> Result<MachineConfig, MachineError> {
    if program.dialect() != spec.dialect() {
        return Err(MachineError::DialectMismatch {
            family: spec.to_string(),
            expected: spec.dialect(),
            got: program.dialect(),
        });
    }
    Ok(match &program.body {
        ProgramBody::Register(p) => MachineConfig::Register(RmConfig {
            line: 0,
            registers: vec![BigUint::zero(); p.register_count],
        }),
        ProgramBody::Turing(t) => MachineConfig::Tape(TmConfig {
            state: t.start,
            head: Ordinal::zero(),
            scratch: Tape::new(),
            output: Tape::new(),
        }),
    })
}

/// Applies one successor step in place. The configuration must not already
/// be halted; dialect agreement is the caller's invariant after
/// [`initial_config`].
pub fn successor_step(
    spec: &FamilySpec,
    config: &mut MachineConfig,
    program: &Program,
    oracle: &Oracle,
) -> StepResult {
    match (config, &program.body) {
        (MachineConfig::Register(c), ProgramBody::Register(p)) => register_step(c, p, oracle),
        (MachineConfig::Tape(c), ProgramBody::Turing(t)) => tape_step(spec, c, t, oracle),
        _ => panic!("configuration/program dialect mismatch"),
    }
}

fn register_step(c: &mut RmConfig, p: &RegisterProgram, oracle: &Oracle) -> StepResult {
    let instr = &p.instructions[c.line];
    let mut next = c.line + 1;
    match instr {
        RegInstr::Zero(r) => c.registers[*r] = BigUint::zero(),
        RegInstr::Inc(r) => c.registers[*r] += 1u32,
        RegInstr::Copy { src, dst } => c.registers[*dst] = c.registers[*src].clone(),
        RegInstr::Jeq { a, b, target } => {
            if c.registers[*a] == c.registers[*b] {
                next = *target;
            }
        }
        RegInstr::Jmp { target } => next = *target,
        RegInstr::OracleRead { idx, dst } => {
            let bit = oracle.bit(&c.registers[*idx]);
            c.registers[*dst] = BigUint::from(bit as u32);
        }
        RegInstr::Halt => return StepResult::Halted(Output::Natural(c.registers[0].clone())),
    }
    if next >= p.instructions.len() {
        // Running off the end halts like an explicit HALT.
        c.line = 0;
        return StepResult::Halted(Output::Natural(c.registers[0].clone()));
    }
    c.line = next;
    StepResult::Next
}

fn tape_step(
    spec: &FamilySpec,
    c: &mut TmConfig,
    t: &TuringTable,
    oracle: &Oracle,
) -> StepResult {
    let (block, off) = split_position(&c.head);
    let scratch_bit = c.scratch.get(&block, off);
    // The oracle is a real: only positions below w read it.
    let oracle_bit = if block.is_zero() {
        oracle.bit(&BigUint::from(off))
    } else {
        false
    };
    let rule = *t.rule(c.state, scratch_bit, oracle_bit);
    c.scratch.set(&block, off, rule.write);
    if rule.out {
        c.output.set(&block, off, rule.write);
    }
    c.head = match rule.mv {
        Move::Right => {
            let next = block.add(&Ordinal::from_nat(off + 1));
            if let FamilySpec::AlphaTm { tape_length } = spec {
                debug_assert!(&next < tape_length, "head stays below the tape bound");
            }
            next
        }
        Move::Left => {
            // At 0 or at a limit position there is no predecessor: go to 0.
            c.head.predecessor().unwrap_or_else(Ordinal::zero)
        }
    };
    if rule.next == t.halt {
        c.state = t.halt;
        return StepResult::Halted(Output::Tape(c.output.clone()));
    }
    c.state = rule.next;
    StepResult::Next
}

/// Evidence that the configuration stream cycles, certified by the runner
/// before any limit jump is taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleEvidence {
    pub kind: CycleKind,
    pub start_time: Ordinal,
    pub period: Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleKind {
    /// The configuration at `start_time` recurs at `start_time + period`.
    ExactRepeat,
    /// Register families: the control path repeats while each register
    /// gains a fixed increment per period. `liminf[r]` is the smallest
    /// value register `r` attains cofinally, `None` when it escapes to
    /// infinity.
    RegisterRamp {
        increments: Vec<BigUint>,
        liminf: Vec<Option<BigUint>>,
    },
    /// Tape families: the configuration recurs shifted `shift` cells
    /// rightward, sweeping a `shift`-periodic `pattern` from `fill_from`.
    HeadTranslation {
        shift: u64,
        pattern: Vec<bool>,
        fill_from: Ordinal,
    },
}

impl CycleEvidence {
    /// Short human-readable summary for reports and traces.
    pub fn summary(&self) -> String {
        let kind = match &self.kind {
            CycleKind::ExactRepeat => "exact-repeat".to_string(),
            CycleKind::RegisterRamp { increments, .. } => {
                let incs: Vec<String> = increments
                    .iter()
                    .enumerate()
                    .filter(|(_, i)| !i.is_zero())
                    .map(|(r, i)| format!("R{r}:+{i}"))
                    .collect();
                format!("ramp[{}]", incs.join(","))
            }
            CycleKind::HeadTranslation { shift, fill_from, .. } => {
                format!("translation[shift={shift},from={fill_from}]")
            }
        };
        format!("{kind} start={} period={}", self.start_time, self.period)
    }
}

/// The limit configuration, or the register whose limit inferior is
/// infinite under the weak (undefined) rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitOutcome {
    Config(MachineConfig),
    UndefinedRegister(usize),
}

/// Computes the configuration at `start_time + period * w` from one period
/// of the cycle. `period_configs` are the configurations at every event in
/// `[start_time, start_time + period)` in order; `end` is the configuration
/// at `start_time + period` itself.
pub fn limit_of_cycle(
    spec: &FamilySpec,
    program: &Program,
    evidence: &CycleEvidence,
    period_configs: &[&MachineConfig],
    end: &MachineConfig,
) -> LimitOutcome {
    assert!(!period_configs.is_empty());
    if spec.is_register() {
        limit_register(spec, evidence, period_configs)
    } else {
        limit_tape(spec, program, evidence, period_configs, end)
    }
}

fn limit_register(
    spec: &FamilySpec,
    evidence: &CycleEvidence,
    period_configs: &[&MachineConfig],
) -> LimitOutcome {
    let rms: Vec<&RmConfig> = period_configs.iter().map(|c| c.as_register()).collect();
    let line = rms.iter().map(|c| c.line).min().expect("nonempty period");
    let register_count = rms[0].registers.len();
    let mut registers = Vec::with_capacity(register_count);
    match &evidence.kind {
        CycleKind::ExactRepeat => {
            for r in 0..register_count {
                registers.push(
                    rms.iter()
                        .map(|c| &c.registers[r])
                        .min()
                        .expect("nonempty period")
                        .clone(),
                );
            }
        }
        CycleKind::RegisterRamp { liminf, .. } => {
            if matches!(spec, FamilySpec::WItrm) {
                if let Some(r) = liminf.iter().position(|v| v.is_none()) {
                    return LimitOutcome::UndefinedRegister(r);
                }
            }
            for value in liminf {
                // Resetting rule: a register escaping to infinity is 0.
                registers.push(value.clone().unwrap_or_else(BigUint::zero));
            }
        }
        CycleKind::HeadTranslation { .. } => {
            unreachable!("translation evidence on a register family")
        }
    }
    LimitOutcome::Config(MachineConfig::Register(RmConfig { line, registers }))
}

fn limit_tape(
    spec: &FamilySpec,
    program: &Program,
    evidence: &CycleEvidence,
    period_configs: &[&MachineConfig],
    end: &MachineConfig,
) -> LimitOutcome {
    let table = program.as_turing().expect("tape family runs turing programs");
    let tms: Vec<&TmConfig> = period_configs.iter().map(|c| c.as_tape()).collect();
    let (scratch, output) = match &evidence.kind {
        CycleKind::HeadTranslation {
            shift, fill_from, ..
        } => {
            let end = end.as_tape();
            let (block, from) = split_position(fill_from);
            let fill = |tape: &Tape| {
                let pattern: Vec<bool> =
                    (0..*shift).map(|r| tape.get(&block, from + r)).collect();
                let mut filled = tape.clone();
                filled.set_tail(&block, from, pattern);
                filled
            };
            (fill(&end.scratch), fill(&end.output))
        }
        _ => {
            let scratches: Vec<&Tape> = tms.iter().map(|c| &c.scratch).collect();
            let outputs: Vec<&Tape> = tms.iter().map(|c| &c.output).collect();
            (Tape::intersect_all(&scratches), Tape::intersect_all(&outputs))
        }
    };
    let (state, head) = match spec {
        FamilySpec::Ittm => (table.limit, Ordinal::zero()),
        FamilySpec::AlphaTm { tape_length } => {
            let (s, h) = liminf_state_head(&tms, evidence);
            // A head limit at the tape bound wraps to 0.
            let h = if &h >= tape_length { Ordinal::zero() } else { h };
            (s, h)
        }
        FamilySpec::Otm => liminf_state_head(&tms, evidence),
        _ => unreachable!("tape limit on a tape family"),
    };
    LimitOutcome::Config(MachineConfig::Tape(TmConfig {
        state,
        head,
        scratch,
        output,
    }))
}

fn liminf_state_head(tms: &[&TmConfig], evidence: &CycleEvidence) -> (usize, Ordinal) {
    let state = tms.iter().map(|c| c.state).min().expect("nonempty period");
    let head = match &evidence.kind {
        CycleKind::HeadTranslation { fill_from, .. } => fill_from.add(&Ordinal::omega()),
        _ => tms
            .iter()
            .map(|c| &c.head)
            .min()
            .expect("nonempty period")
            .clone(),
    };
    (state, head)
}
