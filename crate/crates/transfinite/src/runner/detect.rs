//! Cycle detection over the configuration stream.
//!
//! The runner keeps a sliding window of timestamped configurations. After
//! every event it looks for one of three shapes ending at the current
//! configuration:
//!
//! - exact repeat: an earlier identical configuration (sound by
//!   determinism alone, so a single pair suffices);
//! - register ramp: two consecutive periods with the same control path
//!   whose registers drift by constant per-period increments, proven
//!   stable for all later periods by a symbolic replay when the period is
//!   finite, and by comparing the two materialized periods phase by phase
//!   when the period itself contains limit jumps;
//! - head translation: two consecutive periods in which the whole
//!   configuration recurs shifted rightward by a constant, with the tape
//!   above the sweep and the oracle tail provably shift-periodic.
//!
//! Periods are ordinals, so cycles whose bodies contain limit jumps are
//! detected too; that is what makes halting ordinals like `w^2` reachable.

use crate::machines::{CycleEvidence, CycleKind, MachineConfig, Tape};
use crate::oracle::Oracle;
use crate::ordinal::Ordinal;
use crate::programs::{Program, RegInstr};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Step,
    Jump,
}

#[derive(Debug, Clone)]
pub struct Entry {
    /// Event count when this configuration was reached; doubles as id.
    pub id: u64,
    pub time: Ordinal,
    pub config: MachineConfig,
    pub kind: EventKind,
    hash: u64,
}

pub fn config_hash(config: &MachineConfig) -> u64 {
    let mut h = DefaultHasher::new();
    config.hash(&mut h);
    h.finish()
}

/// Sliding window of recent configurations with hash and location indexes.
pub struct Window {
    entries: VecDeque<Entry>,
    cap: usize,
    by_hash: HashMap<u64, Vec<u64>>,
    by_location: HashMap<usize, Vec<u64>>,
    /// Entries are dense (one per event) above this event id; detection
    /// never reaches across a gap.
    dense_from: u64,
}

impl Window {
    pub fn new(cap: usize) -> Self {
        Window {
            entries: VecDeque::new(),
            cap: cap.max(8),
            by_hash: HashMap::new(),
            by_location: HashMap::new(),
            dense_from: 0,
        }
    }

    pub fn push(&mut self, id: u64, time: Ordinal, config: MachineConfig, kind: EventKind) {
        let hash = config_hash(&config);
        self.by_hash.entry(hash).or_default().push(id);
        self.by_location.entry(config.location()).or_default().push(id);
        self.entries.push_back(Entry {
            id,
            time,
            config,
            kind,
            hash,
        });
        if self.entries.len() > self.cap {
            let evicted = self.entries.pop_front().expect("window is nonempty");
            self.prune(evicted.hash, evicted.config.location());
        }
    }

    /// Records that the event `id` was not snapshotted.
    pub fn note_skip(&mut self, id: u64) {
        self.dense_from = id + 1;
    }

    fn prune(&mut self, hash: u64, location: usize) {
        let first = self.first_id();
        if let Some(v) = self.by_hash.get_mut(&hash) {
            v.retain(|id| *id >= first);
            if v.is_empty() {
                self.by_hash.remove(&hash);
            }
        }
        if let Some(v) = self.by_location.get_mut(&location) {
            v.retain(|id| *id >= first);
            if v.is_empty() {
                self.by_location.remove(&location);
            }
        }
    }

    fn first_id(&self) -> u64 {
        self.entries.front().map_or(0, |e| e.id)
    }

    pub fn get(&self, id: u64) -> Option<&Entry> {
        let first = self.first_id();
        if id < first {
            return None;
        }
        let pos = (id - first) as usize;
        let entry = self.entries.get(pos)?;
        // Positions map 1:1 onto ids only on the dense suffix.
        (entry.id == id).then_some(entry)
    }

    /// Configurations of `[from, to)` by event id, provided the stretch is
    /// densely recorded.
    pub fn slice(&self, from: u64, to: u64) -> Option<Vec<&Entry>> {
        if from < self.dense_from || from < self.first_id() {
            return None;
        }
        let mut out = Vec::with_capacity((to - from) as usize);
        for id in from..to {
            out.push(self.get(id)?);
        }
        Some(out)
    }

    pub fn last(&self) -> Option<&Entry> {
        self.entries.back()
    }

    fn candidates<'a>(
        &'a self,
        index: &'a HashMap<usize, Vec<u64>>,
        key: usize,
        below: u64,
    ) -> impl Iterator<Item = &'a Entry> + 'a {
        index
            .get(&key)
            .into_iter()
            .flat_map(|v| v.iter().rev())
            .filter(move |id| **id < below)
            .filter_map(move |id| self.get(*id))
    }
}

/// A certified cycle: the evidence plus the event ids of its anchor pair,
/// from which the runner slices the period for the limit computation.
pub struct Detection {
    pub evidence: CycleEvidence,
    pub start_id: u64,
    pub end_id: u64,
}

const CANDIDATE_TRIES: usize = 4;
const AFFINE_PERIOD_CAP: u64 = 1 << 14;

pub fn detect(
    window: &Window,
    program: &Program,
    oracle: &Oracle,
    is_register: bool,
) -> Option<Detection> {
    let cur = window.last()?;
    if let Some(d) = detect_exact(window, cur) {
        return Some(d);
    }
    if is_register {
        detect_ramp(window, cur, program, oracle)
    } else {
        detect_translation(window, cur, oracle)
    }
}

fn detect_exact(window: &Window, cur: &Entry) -> Option<Detection> {
    let ids: Vec<u64> = window
        .by_hash
        .get(&cur.hash)?
        .iter()
        .rev()
        .filter(|id| **id < cur.id)
        .copied()
        .collect();
    for id in ids {
        let prior = window.get(id)?;
        if prior.config != cur.config {
            continue;
        }
        if window.slice(prior.id, cur.id).is_none() {
            continue;
        }
        let period = prior
            .time
            .sub_left(&cur.time)
            .expect("window times strictly increase");
        return Some(Detection {
            evidence: CycleEvidence {
                kind: CycleKind::ExactRepeat,
                start_time: prior.time.clone(),
                period,
            },
            start_id: prior.id,
            end_id: cur.id,
        });
    }
    None
}

fn detect_ramp(
    window: &Window,
    cur: &Entry,
    program: &Program,
    oracle: &Oracle,
) -> Option<Detection> {
    let cur_rm = cur.config.as_register();
    let mut tried = 0;
    let prior_ids: Vec<u64> = window
        .candidates(&window.by_location, cur_rm.line, cur.id)
        .map(|e| e.id)
        .collect();
    for prior_id in prior_ids {
        if tried >= CANDIDATE_TRIES {
            break;
        }
        let prior = window.get(prior_id)?;
        let n = cur.id - prior.id;
        if n == 0 {
            continue;
        }
        // Need the entry exactly one period earlier with the same line and
        // the same per-register drift: two consecutive consistent periods.
        let Some(anchor) = prior.id.checked_sub(n).and_then(|id| window.get(id)) else {
            continue;
        };
        let anchor_rm = match &anchor.config {
            MachineConfig::Register(c) => c,
            MachineConfig::Tape(_) => continue,
        };
        let prior_rm = prior.config.as_register();
        if anchor_rm.line != prior_rm.line {
            continue;
        }
        tried += 1;
        let Some(increments) = drift(&anchor_rm.registers, &prior_rm.registers) else {
            continue;
        };
        if increments.iter().all(|i| i.is_zero()) {
            continue; // an exact repeat, handled above
        }
        if drift(&prior_rm.registers, &cur_rm.registers).as_ref() != Some(&increments) {
            continue;
        }
        let Some(first) = window.slice(anchor.id, prior.id) else {
            continue;
        };
        let Some(second) = window.slice(prior.id, cur.id) else {
            continue;
        };
        let period = anchor
            .time
            .sub_left(&prior.time)
            .expect("window times strictly increase");
        let liminf = if period.as_natural().is_some() {
            if n > AFFINE_PERIOD_CAP {
                continue;
            }
            match affine_ramp_proof(program, oracle, anchor_rm, &increments, n) {
                Some(liminf) => liminf,
                None => continue,
            }
        } else {
            match phase_compare_liminf(&first, &second) {
                Some(liminf) => liminf,
                None => continue,
            }
        };
        return Some(Detection {
            evidence: CycleEvidence {
                kind: CycleKind::RegisterRamp { increments, liminf },
                start_time: anchor.time.clone(),
                period,
            },
            start_id: anchor.id,
            end_id: prior.id,
        });
    }
    None
}

/// Per-register nonnegative drift between two snapshots, `None` if any
/// register decreased.
fn drift(from: &[BigUint], to: &[BigUint]) -> Option<Vec<BigUint>> {
    from.iter()
        .zip(to.iter())
        .map(|(a, b)| if b >= a { Some(b - a) } else { None })
        .collect()
}

/// Registers as affine functions `base + j * coeff` of the period index.
#[derive(Clone, PartialEq, Eq)]
struct AffineForm {
    base: BigUint,
    coeff: BigUint,
}

/// Symbolically replays one period and proves the ramp repeats for every
/// period index `j >= 0`: the control path is `j`-independent, oracle
/// queries hit fixed indices, and the final forms advance every register
/// by exactly its increment. Returns each register's limit inferior: the
/// smallest base among phases where its coefficient is zero.
fn affine_ramp_proof(
    program: &Program,
    oracle: &Oracle,
    start: &crate::machines::RmConfig,
    increments: &[BigUint],
    steps: u64,
) -> Option<Vec<Option<BigUint>>> {
    let instructions = &program.as_register()?.instructions;
    let mut line = start.line;
    let mut forms: Vec<AffineForm> = start
        .registers
        .iter()
        .zip(increments.iter())
        .map(|(v, inc)| AffineForm {
            base: v.clone(),
            coeff: inc.clone(),
        })
        .collect();
    let mut liminf: Vec<Option<BigUint>> = vec![None; forms.len()];
    let note_phase = |forms: &[AffineForm], liminf: &mut Vec<Option<BigUint>>| {
        for (r, f) in forms.iter().enumerate() {
            if f.coeff.is_zero() {
                let better = liminf[r].as_ref().map_or(true, |cur| &f.base < cur);
                if better {
                    liminf[r] = Some(f.base.clone());
                }
            }
        }
    };
    note_phase(&forms, &mut liminf);
    for _ in 0..steps {
        let instr = instructions.get(line)?;
        let mut next = line + 1;
        match instr {
            RegInstr::Zero(r) => {
                forms[*r] = AffineForm {
                    base: BigUint::zero(),
                    coeff: BigUint::zero(),
                }
            }
            RegInstr::Inc(r) => forms[*r].base += 1u32,
            RegInstr::Copy { src, dst } => forms[*dst] = forms[*src].clone(),
            RegInstr::OracleRead { idx, dst } => {
                if !forms[*idx].coeff.is_zero() {
                    return None; // the queried index drifts across periods
                }
                let bit = oracle.bit(&forms[*idx].base);
                forms[*dst] = AffineForm {
                    base: BigUint::from(bit as u32),
                    coeff: BigUint::zero(),
                };
            }
            RegInstr::Jeq { a, b, target } => {
                if stable_equal(&forms[*a], &forms[*b])? {
                    next = *target;
                }
            }
            RegInstr::Jmp { target } => next = *target,
            RegInstr::Halt => return None,
        }
        if next >= instructions.len() {
            return None;
        }
        line = next;
        note_phase(&forms, &mut liminf);
    }
    if line != start.line {
        return None;
    }
    // The final phase must be the start phase advanced by one period.
    for (r, f) in forms.iter().enumerate() {
        if f.coeff != increments[r] || f.base != &start.registers[r] + &increments[r] {
            return None;
        }
    }
    Some(liminf)
}

/// Whether two affine forms compare equal for every period index `j >= 0`;
/// `None` when the outcome flips at some `j`.
fn stable_equal(a: &AffineForm, b: &AffineForm) -> Option<bool> {
    if a == b {
        return Some(true);
    }
    if a.coeff == b.coeff {
        return Some(false); // bases differ, gap is constant
    }
    if a.base == b.base {
        return None; // equal now, unequal from j = 1 on
    }
    // base_a + j*coeff_a == base_b + j*coeff_b has a solution j > 0 only
    // when the larger base has the smaller coefficient.
    let (lo_base, hi_base, lo_coeff, hi_coeff) = if a.base < b.base {
        (&a.base, &b.base, &a.coeff, &b.coeff)
    } else {
        (&b.base, &a.base, &b.coeff, &a.coeff)
    };
    if lo_coeff <= hi_coeff {
        return Some(false); // the gap never closes
    }
    let gap = hi_base - lo_base;
    let closing = lo_coeff - hi_coeff;
    if (&gap % &closing).is_zero() {
        None // the gap closes exactly at some period
    } else {
        Some(false)
    }
}

/// Limit inferiors for a ramp whose period contains limit jumps: compares
/// the two materialized periods phase by phase. Registers whose value at
/// some phase is the same in both periods attain that value cofinally.
fn phase_compare_liminf(
    first: &[&Entry],
    second: &[&Entry],
) -> Option<Vec<Option<BigUint>>> {
    if first.len() != second.len() {
        return None;
    }
    let count = first[0].config.as_register().registers.len();
    let mut liminf: Vec<Option<BigUint>> = vec![None; count];
    for (a, b) in first.iter().zip(second.iter()) {
        if a.kind != b.kind {
            return None;
        }
        let (ra, rb) = (a.config.as_register(), b.config.as_register());
        if ra.line != rb.line {
            return None;
        }
        for r in 0..count {
            let (va, vb) = (&ra.registers[r], &rb.registers[r]);
            if vb < va {
                return None;
            }
            if va == vb {
                let better = liminf[r].as_ref().map_or(true, |cur| va < cur);
                if better {
                    liminf[r] = Some(va.clone());
                }
            }
        }
    }
    Some(liminf)
}

fn detect_translation(window: &Window, cur: &Entry, oracle: &Oracle) -> Option<Detection> {
    let cur_tm = cur.config.as_tape();
    let mut tried = 0;
    let prior_ids: Vec<u64> = window
        .candidates(&window.by_location, cur_tm.state, cur.id)
        .map(|e| e.id)
        .collect();
    for prior_id in prior_ids {
        if tried >= CANDIDATE_TRIES {
            break;
        }
        let prior = window.get(prior_id)?;
        let n = cur.id - prior.id;
        if n == 0 {
            continue;
        }
        let Some(anchor) = prior.id.checked_sub(n).and_then(|id| window.get(id)) else {
            continue;
        };
        let anchor_tm = match &anchor.config {
            MachineConfig::Tape(c) => c,
            MachineConfig::Register(_) => continue,
        };
        let prior_tm = prior.config.as_tape();
        if anchor_tm.state != prior_tm.state {
            continue;
        }
        tried += 1;
        // The period must be jump-free; a finite time span guarantees it.
        let period = anchor
            .time
            .sub_left(&prior.time)
            .expect("window times strictly increase");
        if period.as_natural().is_none() {
            continue;
        }
        let (base_a, off_a) = crate::machines::split_position(&anchor_tm.head);
        let (base_p, off_p) = crate::machines::split_position(&prior_tm.head);
        let (base_c, off_c) = crate::machines::split_position(&cur_tm.head);
        if base_a != base_p || base_p != base_c {
            continue;
        }
        if off_p <= off_a || off_c.checked_sub(off_p) != off_p.checked_sub(off_a) {
            continue;
        }
        let shift = off_p - off_a;
        let Some(first) = window.slice(anchor.id, prior.id) else {
            continue;
        };
        // Sweep bounds over the first period.
        let mut lo = off_a;
        let mut hi = off_a;
        let mut in_block = true;
        for e in &first {
            let tm = e.config.as_tape();
            let (b, off) = crate::machines::split_position(&tm.head);
            if b != base_a {
                in_block = false;
                break;
            }
            lo = lo.min(off);
            hi = hi.max(off);
        }
        if !in_block {
            continue;
        }
        if !translation_tapes_ok(anchor_tm, prior_tm, &base_a, lo, hi, shift) {
            continue;
        }
        // Oracle reads along the sweep must repeat shifted.
        if base_a.is_zero() && !oracle.periodic_tail(lo, shift) {
            continue;
        }
        let fill_from = base_a.add(&Ordinal::from_nat(lo));
        let pattern: Vec<bool> = (0..shift)
            .map(|r| prior_tm.scratch.get(&base_a, lo + r))
            .collect();
        return Some(Detection {
            evidence: CycleEvidence {
                kind: CycleKind::HeadTranslation {
                    shift,
                    pattern,
                    fill_from,
                },
                start_time: anchor.time.clone(),
                period,
            },
            start_id: anchor.id,
            end_id: prior.id,
        });
    }
    None
}

/// The shift conditions that make one translated period imply all of them:
/// the configuration after the period equals the one before it shifted by
/// `shift` across the swept stretch, the region below the sweep is
/// untouched, everything outside the block is untouched, and the block
/// content above the sweep is `shift`-periodic so every later period reads
/// what this one did.
fn translation_tapes_ok(
    before: &crate::machines::TmConfig,
    after: &crate::machines::TmConfig,
    base: &Ordinal,
    lo: u64,
    hi: u64,
    shift: u64,
) -> bool {
    let pairs: [(&Tape, &Tape); 2] = [
        (&before.scratch, &after.scratch),
        (&before.output, &after.output),
    ];
    for (tape_before, tape_after) in pairs {
        for y in (lo + shift)..=(hi + shift) {
            if tape_after.get(base, y) != tape_before.get(base, y - shift) {
                return false;
            }
        }
        for y in 0..lo {
            if tape_after.get(base, y) != tape_before.get(base, y) {
                return false;
            }
        }
        if !tape_before.block_periodic_from(base, hi + 1, shift) {
            return false;
        }
        if !tape_before.equal_outside_block(tape_after, base) {
            return false;
        }
    }
    true
}
