//! Sparse tapes indexed by ordinals below the tape bound.
//!
//! Positions decompose uniquely as `block + offset` with `block` zero or a
//! limit ordinal and `offset` a natural. A block stores its 1-cells as a
//! finite set plus an optional eventually-periodic tail, which is what a
//! limit of a rightward translation sweep writes. Representations are kept
//! canonical (primitive period, earliest anchor, no all-zero tail), so
//! structural equality is content equality.

use crate::ordinal::Ordinal;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Tape {
    blocks: BTreeMap<Ordinal, Block>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
struct Block {
    ones: BTreeSet<u64>,
    tail: Option<Tail>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Tail {
    from: u64,
    pattern: Vec<bool>,
}

impl Block {
    fn get(&self, off: u64) -> bool {
        if let Some(tail) = &self.tail {
            if off >= tail.from {
                let idx = ((off - tail.from) % tail.pattern.len() as u64) as usize;
                return tail.pattern[idx];
            }
        }
        self.ones.contains(&off)
    }

    fn normalize(&mut self) {
        if let Some(tail) = &mut self.tail {
            // Reduce to the primitive period.
            let p = tail.pattern.len();
            for d in 1..=p / 2 {
                if p % d == 0 && (d..p).all(|k| tail.pattern[k] == tail.pattern[k % d]) {
                    tail.pattern.truncate(d);
                    break;
                }
            }
            if tail.pattern.iter().all(|b| !b) {
                self.tail = None;
            }
        }
        if let Some(tail) = &mut self.tail {
            // Pull matching cells below the anchor into the tail.
            while tail.from > 0 {
                let prev = tail.from - 1;
                let prev_value = *tail.pattern.last().expect("tail pattern is nonempty");
                if self.ones.contains(&prev) != prev_value {
                    break;
                }
                tail.from = prev;
                tail.pattern.rotate_right(1);
                self.ones.remove(&prev);
            }
        }
    }

    fn is_empty(&self) -> bool {
        self.ones.is_empty() && self.tail.is_none()
    }

    fn render(&self) -> String {
        let highest = self.ones.iter().next_back().map_or(0, |o| o + 1);
        let upto = self.tail.as_ref().map_or(highest, |t| t.from.max(highest));
        let mut s = String::new();
        for off in 0..upto {
            s.push(if self.get(off) { '1' } else { '0' });
        }
        if let Some(tail) = &self.tail {
            s.push('(');
            for b in &tail.pattern {
                s.push(if *b { '1' } else { '0' });
            }
            s.push_str(")*");
        }
        s
    }
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The bit at `block + off`; `block` must be 0 or a limit ordinal.
    pub fn get(&self, block: &Ordinal, off: u64) -> bool {
        self.blocks.get(block).is_some_and(|b| b.get(off))
    }

    /// Reads at an arbitrary ordinal position.
    pub fn get_at(&self, position: &Ordinal) -> bool {
        let (block, off) = split_position(position);
        self.get(&block, off)
    }

    pub fn set(&mut self, block: &Ordinal, off: u64, value: bool) {
        if !value && !self.blocks.contains_key(block) {
            return;
        }
        let entry = self.blocks.entry(block.clone()).or_default();
        if let Some(tail) = entry.tail.clone() {
            if off >= tail.from {
                let p = tail.pattern.len() as u64;
                let current = tail.pattern[((off - tail.from) % p) as usize];
                if current != value {
                    // Materialize the finite stretch below the write and
                    // re-anchor the tail just above it.
                    for k in tail.from..off {
                        if tail.pattern[((k - tail.from) % p) as usize] {
                            entry.ones.insert(k);
                        }
                    }
                    if value {
                        entry.ones.insert(off);
                    }
                    let shift = ((off + 1 - tail.from) % p) as usize;
                    let mut pattern = tail.pattern.clone();
                    pattern.rotate_left(shift);
                    entry.tail = Some(Tail {
                        from: off + 1,
                        pattern,
                    });
                }
                entry.normalize();
                if entry.is_empty() {
                    self.blocks.remove(block);
                }
                return;
            }
        }
        if value {
            entry.ones.insert(off);
        } else {
            entry.ones.remove(&off);
        }
        entry.normalize();
        if entry.is_empty() {
            self.blocks.remove(block);
        }
    }

    pub fn set_at(&mut self, position: &Ordinal, value: bool) {
        let (block, off) = split_position(position);
        self.set(&block, off, value);
    }

    /// Replaces the block content from `from` upward with the repeating
    /// `pattern`, as a limit of a translation sweep does.
    pub fn set_tail(&mut self, block: &Ordinal, from: u64, pattern: Vec<bool>) {
        assert!(!pattern.is_empty());
        let entry = self.blocks.entry(block.clone()).or_default();
        entry.ones.retain(|o| *o < from);
        entry.tail = Some(Tail { from, pattern });
        entry.normalize();
        if entry.is_empty() {
            self.blocks.remove(block);
        }
    }

    /// Rough content size, used to throttle snapshot frequency.
    pub fn weight(&self) -> usize {
        self.blocks
            .values()
            .map(|b| b.ones.len() + b.tail.as_ref().map_or(0, |t| t.pattern.len()) + 1)
            .sum()
    }

    /// Cellwise minimum across tapes: the limit-inferior content of an
    /// exactly repeating cycle.
    pub fn intersect_all(tapes: &[&Tape]) -> Tape {
        match tapes {
            [] => Tape::new(),
            [first, rest @ ..] => {
                let mut acc = (*first).clone();
                for t in rest {
                    acc = acc.intersect(t);
                }
                acc
            }
        }
    }

    pub fn intersect(&self, other: &Tape) -> Tape {
        let mut result = Tape::new();
        for (base, a) in &self.blocks {
            let Some(b) = other.blocks.get(base) else {
                continue;
            };
            let mut out = Block::default();
            match (&a.tail, &b.tail) {
                (Some(ta), Some(tb)) => {
                    let from = ta.from.max(tb.from);
                    let p = num_integer::lcm(ta.pattern.len() as u64, tb.pattern.len() as u64);
                    let pattern: Vec<bool> =
                        (0..p).map(|k| a.get(from + k) && b.get(from + k)).collect();
                    let mut candidates: BTreeSet<u64> = BTreeSet::new();
                    candidates.extend(a.ones.iter().copied().filter(|o| *o < from));
                    candidates.extend(b.ones.iter().copied().filter(|o| *o < from));
                    candidates.extend(ta.from.min(tb.from)..from);
                    for off in candidates {
                        if a.get(off) && b.get(off) {
                            out.ones.insert(off);
                        }
                    }
                    out.tail = Some(Tail { from, pattern });
                }
                _ => {
                    let (finite, rhs) = if a.tail.is_none() { (a, b) } else { (b, a) };
                    for off in &finite.ones {
                        if rhs.get(*off) {
                            out.ones.insert(*off);
                        }
                    }
                }
            }
            out.normalize();
            if !out.is_empty() {
                result.blocks.insert(base.clone(), out);
            }
        }
        result
    }

    /// True when the block content satisfies `get(y) == get(y + delta)` for
    /// every `y >= start`.
    pub fn block_periodic_from(&self, block: &Ordinal, start: u64, delta: u64) -> bool {
        debug_assert!(delta > 0);
        let Some(b) = self.blocks.get(block) else {
            return true;
        };
        let bound = match &b.tail {
            Some(tail) => {
                start.max(tail.from) + num_integer::lcm(tail.pattern.len() as u64, delta)
            }
            None => match b.ones.iter().next_back() {
                Some(last) => last + 1,
                None => return true,
            },
        };
        (start..bound).all(|y| b.get(y) == b.get(y + delta))
    }

    /// Whether the two tapes agree on every block except `block`.
    pub fn equal_outside_block(&self, other: &Tape, block: &Ordinal) -> bool {
        let mine = self.blocks.iter().filter(|(b, _)| *b != block);
        let theirs = other.blocks.iter().filter(|(b, _)| *b != block);
        mine.eq(theirs)
    }

    /// Canonical text description: block bodies as bit strings with an
    /// optional `(pattern)*` tail, non-zero blocks prefixed `@base:`,
    /// joined by `;`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (base, block) in &self.blocks {
            if base.is_zero() {
                parts.push(block.render());
            } else {
                parts.push(format!("@{base}:{}", block.render()));
            }
        }
        parts.join(";")
    }
}

/// Splits an ordinal position into its block base and finite offset.
/// Offsets beyond `u64` are unreachable at desk scale.
pub fn split_position(position: &Ordinal) -> (Ordinal, u64) {
    let (block, off) = position.split_block();
    let off = u64::try_from(&off).expect("tape offset fits in u64 at desk scale");
    (block, off)
}
