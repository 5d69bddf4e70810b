//! Reals as oracles: total bit-at-index functions with finite descriptions.
//!
//! Every descriptor denotes an element of `2^w`. Pseudorandom oracles hash
//! `(seed, index)` so that arbitrary indices can be queried in any order
//! with identical results across runs and platforms.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use sha2::{Digest, Sha256};
use std::fmt;
use std::sync::Arc;

/// An infinite binary sequence with a finite description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Oracle {
    /// All bits 0.
    Zero,
    /// Bit 1 exactly at the listed indices.
    FiniteSupport(Vec<BigUint>),
    /// A finite prefix followed by a repeating nonempty period.
    EventuallyPeriodic { prefix: Vec<bool>, period: Vec<bool> },
    /// Keyed-hash bits of `(seed, index)`.
    Pseudorandom { seed: u64 },
    /// Interleaving: even bits from the left real, odd bits from the right.
    Join(Arc<Oracle>, Arc<Oracle>),
}

impl Oracle {
    pub fn join(left: Oracle, right: Oracle) -> Oracle {
        Oracle::Join(Arc::new(left), Arc::new(right))
    }

    /// The bit at index `n`. Total and deterministic for every descriptor.
    pub fn bit(&self, n: &BigUint) -> bool {
        match self {
            Oracle::Zero => false,
            Oracle::FiniteSupport(support) => support.contains(n),
            Oracle::EventuallyPeriodic { prefix, period } => {
                if let Some(i) = n.to_usize() {
                    if i < prefix.len() {
                        return prefix[i];
                    }
                }
                let offset = n - prefix.len();
                let idx = (offset % period.len()).to_usize().expect("mod of usize fits");
                period[idx]
            }
            Oracle::Pseudorandom { seed } => {
                let mut hasher = Sha256::new();
                hasher.update(seed.to_le_bytes());
                hasher.update(n.to_bytes_le());
                hasher.finalize()[0] & 1 == 1
            }
            Oracle::Join(left, right) => {
                let (half, parity) = (n / 2u32, n % 2u32);
                if parity.is_zero() {
                    left.bit(&half)
                } else {
                    right.bit(&half)
                }
            }
        }
    }

    /// Convenience for small indices.
    pub fn bit_at(&self, n: u64) -> bool {
        self.bit(&BigUint::from(n))
    }

    /// True only when the tail from `start` is provably `delta`-periodic:
    /// `bit(i + delta) == bit(i)` for all `i >= start`. Conservative; a
    /// `false` answer makes the caller skip a fast-forward, never lie.
    pub fn periodic_tail(&self, start: u64, delta: u64) -> bool {
        debug_assert!(delta > 0);
        match self {
            Oracle::Zero => true,
            Oracle::FiniteSupport(support) => {
                support.iter().all(|i| i < &BigUint::from(start))
            }
            Oracle::EventuallyPeriodic { prefix, period } => {
                let settle = start.max(prefix.len() as u64);
                let span = lcm(period.len() as u64, delta);
                (start..settle + span).all(|i| self.bit_at(i + delta) == self.bit_at(i))
            }
            Oracle::Pseudorandom { .. } => false,
            Oracle::Join(left, right) => {
                if delta % 2 != 0 {
                    return false;
                }
                left.periodic_tail(start.div_ceil(2), delta / 2)
                    && right.periodic_tail(start / 2, delta / 2)
            }
        }
    }

    /// Parses the CLI descriptor syntax: `zero`, `support:3,5,8`,
    /// `periodic:10/01`, `rand:SEED`, `join(DESC,DESC)`.
    pub fn parse(text: &str) -> Result<Oracle, OracleParseError> {
        let text = text.trim();
        if text == "zero" {
            return Ok(Oracle::Zero);
        }
        if let Some(rest) = text.strip_prefix("support:") {
            let mut support = Vec::new();
            if !rest.is_empty() {
                for part in rest.split(',') {
                    let n: BigUint = part.trim().parse().map_err(|_| OracleParseError {
                        descriptor: text.to_string(),
                        message: format!("bad support index `{part}`"),
                    })?;
                    support.push(n);
                }
            }
            support.sort();
            support.dedup();
            return Ok(Oracle::FiniteSupport(support));
        }
        if let Some(rest) = text.strip_prefix("periodic:") {
            let (prefix, period) = rest.split_once('/').ok_or_else(|| OracleParseError {
                descriptor: text.to_string(),
                message: "periodic descriptor needs `prefix/period`".to_string(),
            })?;
            let parse_bits = |s: &str| -> Result<Vec<bool>, OracleParseError> {
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(OracleParseError {
                            descriptor: text.to_string(),
                            message: format!("bad bit `{c}`"),
                        }),
                    })
                    .collect()
            };
            let period = parse_bits(period)?;
            if period.is_empty() {
                return Err(OracleParseError {
                    descriptor: text.to_string(),
                    message: "period must be nonempty".to_string(),
                });
            }
            return Ok(Oracle::EventuallyPeriodic {
                prefix: parse_bits(prefix)?,
                period,
            });
        }
        if let Some(rest) = text.strip_prefix("rand:") {
            let seed = rest.trim().parse().map_err(|_| OracleParseError {
                descriptor: text.to_string(),
                message: format!("bad seed `{rest}`"),
            })?;
            return Ok(Oracle::Pseudorandom { seed });
        }
        if let Some(rest) = text.strip_prefix("join(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| OracleParseError {
                descriptor: text.to_string(),
                message: "join descriptor needs a closing `)`".to_string(),
            })?;
            // Split at the top-level comma.
            let mut depth = 0usize;
            let mut split = None;
            for (i, c) in inner.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth = depth.saturating_sub(1),
                    ',' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let split = split.ok_or_else(|| OracleParseError {
                descriptor: text.to_string(),
                message: "join descriptor needs two operands".to_string(),
            })?;
            let left = Oracle::parse(&inner[..split])?;
            let right = Oracle::parse(&inner[split + 1..])?;
            return Ok(Oracle::join(left, right));
        }
        Err(OracleParseError {
            descriptor: text.to_string(),
            message: "unknown descriptor".to_string(),
        })
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// Derives the per-trial oracle seed as a pure function of the sampler seed
/// and the trial index (splitmix64 over the combined word).
pub fn trial_seed(sampler_seed: u64, trial: u64) -> u64 {
    let mut z = sampler_seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(trial.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(0x94d0_49bb_1331_11eb);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleParseError {
    pub descriptor: String,
    pub message: String,
}

impl fmt::Display for OracleParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad oracle descriptor `{}`: {}", self.descriptor, self.message)
    }
}

impl std::error::Error for OracleParseError {}
