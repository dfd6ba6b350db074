//! The pressure quantities: topological, spanning-set measure pressure,
//! Carathéodory pressure of cylinder unions, and lower/upper capacity
//! pressure.
//!
//! Every Bowen ball `B_n(x, ε)` is the depth-`n + m` cylinder of `x`, where
//! `m = m(ε)` is the extra depth from [`SymbolicSystem::extra_depth`]; all
//! functions here take `m` directly.

use alloc::vec::Vec;

use crate::potentials::{Mode, PotentialSequence};
use crate::symbolic::SymbolicSystem;
use crate::Result;

mod cover;
mod generic;
mod partition;
mod spanning;

pub use cover::{
    capacity_pressure, caratheodory_m, caratheodory_pressure, CaratheodoryResult, CoverProblem,
    CoverTree, MEntry, ZSet,
};
pub use generic::{generic_set_pressure, GenericParams, GenericSetResult};
pub use partition::{
    equilibrium_markov_measure, log_partition_sum, partition_sum, topological_pressure,
    transfer_pressure_exact,
};
pub use spanning::{measure_pressure, measure_pressure_spanning, SpanningBracket};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureKind {
    Topological,
    MeasureSpanning,
    Caratheodory,
    CapacityLower,
    CapacityUpper,
    GenericSet,
}

impl PressureKind {
    pub fn name(self) -> &'static str {
        match self {
            PressureKind::Topological => "topological",
            PressureKind::MeasureSpanning => "measure_spanning",
            PressureKind::Caratheodory => "caratheodory",
            PressureKind::CapacityLower => "capacity_lower",
            PressureKind::CapacityUpper => "capacity_upper",
            PressureKind::GenericSet => "generic_set",
        }
    }
}

/// How a Bowen ball is weighted: by the supremum of `f_n` over the ball or by
/// `f_n` at the ball's canonical center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BallWeighting {
    #[default]
    Sup,
    Center,
}

impl BallWeighting {
    pub fn name(self) -> &'static str {
        match self {
            BallWeighting::Sup => "sup",
            BallWeighting::Center => "center",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerN {
    pub n: usize,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureEstimate {
    pub kind: PressureKind,
    pub mode: Mode,
    pub weighting: BallWeighting,
    /// Extra Bowen-ball depth `m(ε)`.
    pub m: usize,
    pub delta: Option<f64>,
    pub per_n: Vec<PerN>,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Both bracket ends are rigorous bounds on the limit.
    pub certified: bool,
    /// Max over the last quarter of `per_n`.
    pub limsup_tail: f64,
    /// Min over the last quarter of `per_n`.
    pub liminf_tail: f64,
}

impl PressureEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `(limsup-style, liminf-style)` tail statistics of the values.
pub(crate) fn tail_stats(per_n: &[PerN]) -> (f64, f64) {
    let t = crate::numeric::tail_len(per_n.len());
    per_n[per_n.len() - t..]
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), p| {
            (hi.max(p.value), lo.min(p.value))
        })
}

/// Weight `w` of the depth-`(n + m)` cylinder `[word]` as a Bowen ball of order `n`.
pub fn cylinder_weight(
    pot: &PotentialSequence,
    sys: &SymbolicSystem,
    word: &[u8],
    n: usize,
    weighting: BallWeighting,
) -> Result<f64> {
    if word.len() >= n + pot.lookahead() {
        return Ok(pot.evaluate(word, n));
    }
    Ok(match weighting {
        BallWeighting::Sup => pot.cylinder_extremes(sys, word, n).1,
        BallWeighting::Center => pot.evaluate_point(&sys.canonical_point(word)?, n),
    })
}

pub(crate) fn validate_range(ns: &[usize]) -> Result<()> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(crate::Error::InvalidArgument(
            "n range must be non-empty and positive".into(),
        ));
    }
    Ok(())
}
