#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::cover::{caratheodory_pressure, log_lambda, CoverProblem, ZSet};
use super::{cylinder_weight, BallWeighting, PerN, PressureEstimate, PressureKind};
use crate::interval::Interval;
use crate::measures::{kingman_limit, KingmanParams, MarkovMeasure};
use crate::potentials::PotentialSequence;
use crate::symbolic::{SymbolicSystem, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct GenericParams {
    pub sample_count: usize,
    /// Length of the orbit used for the long-run diagnostics.
    pub orbit_len: usize,
    /// Cylinder depth `N + m` of the proxy set.
    pub depth: usize,
    pub m: usize,
    /// Allowed deviation of the entropy and potential averages from `h` and `F_*`.
    pub tolerance: f64,
    pub seed: u64,
    pub weighting: BallWeighting,
    pub kingman: KingmanParams,
    pub cap: u64,
}

impl Default for GenericParams {
    fn default() -> Self {
        Self {
            sample_count: 500,
            orbit_len: 4000,
            depth: 12,
            m: 0,
            tolerance: 0.1,
            seed: 2025,
            weighting: BallWeighting::Sup,
            kingman: KingmanParams::default(),
            cap: crate::DEFAULT_WORD_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericSetResult {
    /// Importance-weighted estimate of `(1/N) log Λ` over the generic layer at depth `N + m`.
    pub estimate: PressureEstimate,
    /// `h_μ + F_*(μ)`.
    pub target: f64,
    pub entropy: f64,
    pub kingman_value: f64,
    pub passed: usize,
    pub distinct_cylinders: usize,
    /// `(1/N) log Λ` of the union of the sampled cylinders themselves.
    pub union_capacity: f64,
    /// Carathéodory root bracket of the union, when a sign change was found.
    pub union_caratheodory: Option<Interval>,
}

/// Pressure of the set of generic points, estimated from samples of `μ`.
///
/// A sampled point passes when its long-orbit entropy and potential averages
/// and its depth-`N` cylinder statistics are all within `tolerance` of `h_μ`
/// and `F_*(μ)`. The generic layer is the set of depth-`(N + m)` cylinders
/// whose statistics pass; `Λ` of that layer is estimated without bias by
/// `(1/S) Σ_pass exp(w(c)) / μ(c)`, with a ±3 standard error bracket.
pub fn generic_set_pressure(
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    mu: &MarkovMeasure,
    params: &GenericParams,
) -> Result<GenericSetResult> {
    let GenericParams {
        sample_count,
        orbit_len,
        depth,
        m,
        tolerance,
        seed,
        weighting,
        cap,
        ..
    } = *params;
    if depth <= m || sample_count == 0 || orbit_len < depth {
        return Err(Error::InvalidArgument(
            "generic set needs depth > m, samples > 0 and orbit_len ≥ depth".into(),
        ));
    }
    let n = depth - m;
    let h = mu.entropy_exact();
    let fstar = kingman_limit(pot, mu, sys, &params.kingman)?.value;
    let la = pot.lookahead();

    let mut terms: Vec<f64> = Vec::with_capacity(sample_count);
    let mut union: BTreeSet<Vec<u8>> = BTreeSet::new();
    for i in 0..sample_count {
        let x = mu.sample_orbit_stream(orbit_len + la, seed, i as u64);
        let long_h = -mu.log_cylinder_measure(&x[..orbit_len]) / orbit_len as f64;
        let long_f = pot.evaluate(&x, orbit_len) / orbit_len as f64;
        let c = &x[..depth];
        let log_mu = mu.log_cylinder_measure(c);
        let w = cylinder_weight(pot, sys, c, n, weighting)?;
        let short_h = -log_mu / n as f64;
        let short_f = w / n as f64;
        let pass = (long_h - h).abs() <= tolerance
            && (long_f - fstar).abs() <= tolerance
            && (short_h - h).abs() <= tolerance
            && (short_f - fstar).abs() <= tolerance;
        if pass {
            terms.push(w - log_mu);
            union.insert(c.to_vec());
        } else {
            terms.push(f64::NEG_INFINITY);
        }
    }
    let passed = terms.iter().filter(|t| t.is_finite()).count();
    if passed < 10 {
        return Err(Error::InsufficientGenericSamples { passed });
    }

    // Mean and standard error of exp(terms), computed relative to the largest term.
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = terms.iter().map(|t| (t - top).exp()).collect();
    let s = sample_count as f64;
    let mean = scaled.iter().sum::<f64>() / s;
    let var = if sample_count > 1 {
        scaled.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (s - 1.0)
    } else {
        0.0
    };
    let se = (var / s).sqrt();
    let nf = n as f64;
    let value = (top + mean.ln()) / nf;
    let lower = (top + (mean - 3.0 * se).max(mean * 1e-6).ln()) / nf;
    let upper = (top + (mean + 3.0 * se).ln()) / nf;

    let z = ZSet::Words(union.iter().map(|w| Word(w.clone())).collect());
    let union_capacity = log_lambda(&z, sys, pot, n, m, weighting, cap)? / nf;
    let problem = CoverProblem {
        z,
        n_min: n,
        depth_cap: depth + 4,
    };
    let union_caratheodory =
        caratheodory_pressure(&problem, sys, pot, m, weighting, &[n], 1e-3, cap)
            .ok()
            .map(|r| r.root_bracket);

    let estimate = PressureEstimate {
        kind: PressureKind::GenericSet,
        mode: pot.mode(),
        weighting,
        m,
        delta: None,
        per_n: alloc::vec![PerN { n, value, lower, upper }],
        value,
        lower,
        upper,
        certified: false,
        limsup_tail: value,
        liminf_tail: value,
    };
    Ok(GenericSetResult {
        estimate,
        target: h + fstar,
        entropy: h,
        kingman_value: fstar,
        passed,
        distinct_cylinders: union.len(),
        union_capacity,
        union_caratheodory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_measure_recovers_log_two() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let mu = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        let zero = PotentialSequence::zero(2).unwrap();
        let params = GenericParams {
            sample_count: 100,
            depth: 8,
            orbit_len: 1000,
            kingman: KingmanParams { n_exact: 4, mc_orbits: 4, mc_length: 1000, ..Default::default() },
            ..Default::default()
        };
        let r = generic_set_pressure(&sys, &zero, &mu, &params).unwrap();
        // every term is exactly 2^8
        assert!((r.estimate.value - 2f64.ln()).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn too_strict_tolerance_fails() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let mu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
        let zero = PotentialSequence::zero(2).unwrap();
        let params = GenericParams {
            sample_count: 20,
            depth: 9,
            orbit_len: 100,
            tolerance: 1e-9,
            kingman: KingmanParams { n_exact: 4, mc_orbits: 4, mc_length: 1000, ..Default::default() },
            ..Default::default()
        };
        assert!(matches!(
            generic_set_pressure(&sys, &zero, &mu, &params),
            Err(Error::InsufficientGenericSamples { .. })
        ));
    }
}
