//! Simulators for transfinite computation models.
//!
//! The crate implements five machine families with exact ordinal clocks:
//! weak and resetting infinite time register machines (`wITRM`, `ITRM`),
//! infinite time Turing machines (`ITTM`), `alpha`-Turing machines with a
//! bounded ordinal tape, and ordinal Turing machines (`OTM`) with an
//! unbounded sparse tape. Runs cross limit ordinals by detecting cycles in
//! the configuration stream and jumping to the certified limit-inferior
//! configuration, so halting ordinals like `w+2`, `w*2+2` or `w^2+2` are
//! reported exactly, in Cantor normal form.
//!
//! Layers, bottom up:
//! - [`ordinal`]: exact Cantor-normal-form arithmetic below epsilon-zero,
//!   parsing/printing, and Goedel pairing.
//! - [`oracle`]: reals as total bit functions with finite descriptions.
//! - [`programs`]: the two program dialects (register and Turing), their
//!   parsers, and a bijective Goedel numbering per dialect.
//! - [`machines`]: per-family successor-step and limit-step semantics.
//! - [`runner`]: the transfinite execution engine, cycle detection and
//!   certified limit jumps, writability classification, real prefixes,
//!   the halting census, and Monte Carlo oracle sampling.

pub mod machines;
pub mod oracle;
pub mod ordinal;
pub mod programs;
pub mod runner;

pub use machines::{FamilySpec, MachineConfig, Output, RmConfig, TmConfig};
pub use oracle::Oracle;
pub use ordinal::{parse_ordinal, Ordinal};
pub use programs::{Dialect, Program};
pub use runner::{Budget, RunOutcome, Runner};
