//! Nonadditive thermodynamic formalism on one-sided subshifts of finite type.
//!
//! The crate computes the pressure quantities attached to subadditive and
//! supadditive potential sequences (topological, spanning-set measure
//! pressure, Carathéodory pressure on cylinder unions, lower and upper
//! capacity pressure), the Kingman limits `F_*(μ)` / `Φ_*(μ)` of Markov
//! measures, and the dimension quantities of one-dimensional cookie-cutter
//! repellers obtained from the Bowen equation `P(T, -sF) = 0`.
//!
//! Every Bowen ball on the ultrametric `d(x, y) = θ^{min{i : x_i ≠ y_i}}` is a
//! cylinder, so the combinatorics at a fixed scale are exact. The only
//! approximations are the limits in `n`, which are reported as brackets.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the experiment
//! runner and the CLI live in the `pressurekit` crate.
#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod dimension;
mod error;
pub mod interval;
pub mod linalg;
pub mod measures;
mod numeric;
pub mod potentials;
pub mod pressure;
pub mod rng;
pub mod symbolic;

pub use error::{Error, Result};
pub use interval::Interval;
pub use measures::{KingmanBracket, KingmanParams, MarkovMeasure};
pub use numeric::LogSumExp;
pub use potentials::{Mode, PotentialSequence};
pub use pressure::{BallWeighting, PressureEstimate, PressureKind};
pub use symbolic::{Point, SymbolicSystem, Word};

/// Largest number of cylinders any single enumeration may visit.
pub const DEFAULT_WORD_CAP: u64 = 2_000_000;
