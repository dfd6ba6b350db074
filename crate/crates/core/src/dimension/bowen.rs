use alloc::vec::Vec;

use crate::interval::Interval;
use crate::potentials::PotentialSequence;
use crate::pressure::{topological_pressure, BallWeighting, PressureEstimate};
use crate::symbolic::SymbolicSystem;
use crate::{Error, Result, DEFAULT_WORD_CAP};

#[derive(Debug, Clone)]
pub struct BowenParams {
    pub n_range: Vec<usize>,
    /// Word length at which uniform growth `f_n / n ≥ c > 0` is checked.
    pub n_probe: usize,
    pub m: usize,
    pub weighting: BallWeighting,
    pub s_tol: f64,
    pub cap: u64,
}

impl Default for BowenParams {
    fn default() -> Self {
        Self {
            n_range: (1..=12).collect(),
            n_probe: 8,
            m: 0,
            weighting: BallWeighting::Sup,
            s_tol: 1e-4,
            cap: DEFAULT_WORD_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BowenRoot {
    /// Moves only when the pressure bracket has a definite sign.
    pub certified: Interval,
    /// Follows the sign of the pressure estimate.
    pub estimate: Interval,
    /// `certified` reached `s_tol`.
    pub converged: bool,
    /// Minimal growth `min f_{n_probe} / n_probe`.
    pub growth: f64,
    /// `P(T, 0)`, the entropy bound that starts the bisection.
    pub pressure_at_zero: PressureEstimate,
}

/// Root `s_0` of `s ↦ P(T, -sF)`, by bisection on `[0, P(T, 0) / c]`.
///
/// Strict monotonicity (slope ≤ `-c`) follows from the growth check.
pub fn bowen_root(sys: &SymbolicSystem, pot: &PotentialSequence, params: &BowenParams) -> Result<BowenRoot> {
    let n = params.n_probe.max(1);
    let mut growth = f64::INFINITY;
    sys.for_each_word(n, params.cap, |w| {
        growth = growth.min(pot.cylinder_extremes(sys, w, n).0 / n as f64);
    })?;
    if !(growth > 0.0) {
        return Err(Error::NotExpanding { growth });
    }
    let pressure = |s: f64| {
        topological_pressure(
            sys,
            &PotentialSequence::scaled(-s, pot),
            params.m,
            &params.n_range,
            params.weighting,
            params.cap,
        )
    };
    let p0 = pressure(0.0)?;
    let hi = p0.upper / growth * (1.0 + 1e-9) + 1e-12;
    let mut cert = (0.0, hi);
    let mut est = (0.0, hi);
    let mut cert_open = true;
    for _ in 0..200 {
        let cert_done = !cert_open || cert.1 - cert.0 <= params.s_tol;
        let est_done = est.1 - est.0 <= params.s_tol;
        if cert_done && est_done {
            break;
        }
        if !cert_done {
            let mid = 0.5 * (cert.0 + cert.1);
            let p = pressure(mid)?;
            if p.lower > 0.0 {
                cert.0 = mid;
            } else if p.upper < 0.0 {
                cert.1 = mid;
            } else {
                cert_open = false;
            }
        }
        if !est_done {
            let mid = 0.5 * (est.0 + est.1);
            if pressure(mid)?.value > 0.0 {
                est.0 = mid;
            } else {
                est.1 = mid;
            }
        }
    }
    let certified = Interval::new(cert.0, cert.1);
    Ok(BowenRoot {
        converged: certified.width() <= params.s_tol,
        certified,
        estimate: Interval::new(est.0, est.1),
        growth,
        pressure_at_zero: p0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_expansion() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let f = PotentialSequence::constant(2, 3f64.ln()).unwrap();
        let r = bowen_root(&sys, &f, &BowenParams { s_tol: 1e-6, ..Default::default() }).unwrap();
        let s0 = 2f64.ln() / 3f64.ln();
        assert!(r.certified.contains(s0) && r.converged, "{r:?}");
    }

    #[test]
    fn moran_root() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let f = PotentialSequence::birkhoff(2, 1, alloc::vec![2f64.ln(), 4f64.ln()]).unwrap();
        let r = bowen_root(&sys, &f, &BowenParams { s_tol: 1e-6, ..Default::default() }).unwrap();
        // 2^{-s} + 4^{-s} = 1  ⇔  2^{-s} = (√5 - 1)/2
        let s0 = -((5f64.sqrt() - 1.0) / 2.0).ln() / 2f64.ln();
        assert!(r.certified.contains(s0), "{r:?}");
        assert!((s0 - 0.694242).abs() < 1e-6);
    }

    #[test]
    fn golden_mean_root() {
        let sys = SymbolicSystem::golden_mean(0.5).unwrap();
        let f = PotentialSequence::constant(2, 3f64.ln()).unwrap();
        let r = bowen_root(&sys, &f, &BowenParams { n_range: (1..=20).collect(), ..Default::default() }).unwrap();
        let s0 = ((1.0 + 5f64.sqrt()) / 2.0).ln() / 3f64.ln();
        assert!(r.certified.contains(s0), "{r:?}");
        assert!(r.estimate.distance(s0) < 0.03, "{r:?}");
    }

    #[test]
    fn non_expanding_rejected() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let f = PotentialSequence::birkhoff(2, 1, alloc::vec![1.0, -0.5]).unwrap();
        assert!(matches!(
            bowen_root(&sys, &f, &BowenParams::default()),
            Err(Error::NotExpanding { .. })
        ));
    }
}
