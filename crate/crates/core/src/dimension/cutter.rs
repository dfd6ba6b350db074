#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::potentials::PotentialSequence;
use crate::{Error, Result};

/// An inverse branch `g: [0, 1] → [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    /// `g(x) = offset + slope·x`.
    Affine { slope: f64, offset: f64 },
    /// `g(x) = offset + slope·x + amplitude·sin(2πx)/(2π)`.
    Sine { slope: f64, offset: f64, amplitude: f64 },
}

impl Branch {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Branch::Affine { slope, offset } => offset + slope * x,
            Branch::Sine { slope, offset, amplitude } => {
                offset + slope * x + amplitude * (2.0 * PI * x).sin() / (2.0 * PI)
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Branch::Affine { slope, .. } => slope,
            Branch::Sine { slope, amplitude, .. } => slope + amplitude * (2.0 * PI * x).cos(),
        }
    }

    /// `(min |g'|, max |g'|)` over `[0, 1]`.
    pub fn derivative_range(&self) -> (f64, f64) {
        match *self {
            Branch::Affine { slope, .. } => (slope.abs(), slope.abs()),
            Branch::Sine { slope, amplitude, .. } => {
                (slope.abs() - amplitude.abs(), slope.abs() + amplitude.abs())
            }
        }
    }

    fn lipschitz_log_derivative(&self) -> f64 {
        match *self {
            Branch::Affine { .. } => 0.0,
            Branch::Sine { amplitude, .. } => {
                2.0 * PI * amplitude.abs() / self.derivative_range().0
            }
        }
    }
}

/// Expanding interval map whose inverse branches map `[0, 1]` into disjoint
/// subintervals; the repeller is coded by the full shift on the branches.
#[derive(Debug, Clone, PartialEq)]
pub struct CookieCutter {
    branches: Vec<Branch>,
}

impl CookieCutter {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        if branches.len() < 2 {
            return Err(Error::InvalidArgument("a cookie cutter needs at least two branches".into()));
        }
        for (i, b) in branches.iter().enumerate() {
            let (lo, hi) = b.derivative_range();
            if !(lo > 0.0 && hi < 1.0) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "branch {i} is not a monotone contraction: |g'| in [{lo}, {hi}]"
                )));
            }
            let (a, c) = (b.eval(0.0), b.eval(1.0));
            if a.min(c) < 0.0 || a.max(c) > 1.0 {
                return Err(Error::SeparationViolated(alloc::format!(
                    "branch {i} leaves [0, 1]"
                )));
            }
        }
        let cc = Self { branches };
        cc.realize(1)?;
        Ok(cc)
    }

    pub fn middle_third() -> Self {
        Self::affine(&[(1.0 / 3.0, 0.0), (1.0 / 3.0, 2.0 / 3.0)]).expect("valid cutter")
    }

    /// Affine branches from `(slope, offset)` pairs.
    pub fn affine(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(slope, offset)| Branch::Affine { slope, offset })
                .collect(),
        )
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn is_affine(&self) -> bool {
        self.branches.iter().all(|b| matches!(b, Branch::Affine { .. }))
    }

    /// Largest contraction ratio `max |g'|`.
    pub fn max_contraction(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.derivative_range().1)
            .fold(0.0, f64::max)
    }

    /// `g_{w_0} ∘ ⋯ ∘ g_{w_{d-1}}([0, 1])`.
    pub fn interval(&self, word: &[u8]) -> (f64, f64) {
        let mut a = 0.0;
        let mut b = 1.0;
        for &s in word.iter().rev() {
            let g = &self.branches[s as usize];
            a = g.eval(a);
            b = g.eval(b);
        }
        (a.min(b), a.max(b))
    }

    /// The `k^depth` cylinder intervals in lexicographic word order.
    pub fn realize(&self, depth: usize) -> Result<Vec<(f64, f64)>> {
        let k = self.branches.len();
        let count = (k as u64).checked_pow(depth as u32).filter(|&c| c <= crate::DEFAULT_WORD_CAP);
        let Some(count) = count else {
            return Err(Error::TooLarge {
                depth,
                count: u64::MAX,
                cap: crate::DEFAULT_WORD_CAP,
            });
        };
        let mut out = Vec::with_capacity(count as usize);
        let mut word = alloc::vec![0u8; depth];
        for mut code in 0..count {
            for slot in word.iter_mut().rev() {
                *slot = (code % k as u64) as u8;
                code /= k as u64;
            }
            out.push(self.interval(&word));
        }
        let mut sorted = out.clone();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in sorted.windows(2) {
            if w[1].0 <= w[0].1 {
                return Err(Error::SeparationViolated(alloc::format!(
                    "depth-{depth} intervals [{}, {}] and [{}, {}] meet",
                    w[0].0,
                    w[0].1,
                    w[1].0,
                    w[1].1
                )));
            }
        }
        Ok(out)
    }

    /// `log |f'|` along the coding as a Birkhoff potential of block length `L`:
    /// `φ(a_0 … a_{L-1}) = -log |g'_{a_0}(z)|` with `z` the midpoint of the
    /// interval of `a_1 … a_{L-1}`. Affine cutters are exact at `L = 1`.
    pub fn derivative_potential(&self, locality: usize) -> Result<PotentialSequence> {
        let k = self.branches.len();
        PotentialSequence::birkhoff_fn(k, locality.max(1), |block| {
            let (a, b) = self.interval(&block[1..]);
            let z = 0.5 * (a + b);
            -self.branches[block[0] as usize].derivative(z).abs().ln()
        })
    }

    /// Bound on `|φ(block) - log |f'(x)||` for `x` in the block's cylinder.
    pub fn derivative_modulus(&self, locality: usize) -> f64 {
        let lip = self
            .branches
            .iter()
            .map(Branch::lipschitz_log_derivative)
            .fold(0.0, f64::max);
        if lip == 0.0 {
            return 0.0;
        }
        // intervals of length L-1 words are at most max_contraction^(L-1) long
        lip * 0.5 * self.max_contraction().powi(locality.max(1) as i32 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_third_depth_two() {
        let iv = CookieCutter::middle_third().realize(2).unwrap();
        let starts = [0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0];
        for (i, (a, b)) in iv.iter().enumerate() {
            assert!((a - starts[i]).abs() < 1e-15);
            assert!((b - a - 1.0 / 9.0).abs() < 1e-15);
        }
        assert_eq!(CookieCutter::middle_third().realize(1).unwrap().len(), 2);
    }

    #[test]
    fn nonlinear_lengths_within_chain_rule_bounds() {
        let cc = CookieCutter::new(alloc::vec![
            Branch::Sine { slope: 0.375, offset: 0.0, amplitude: 0.125 },
            Branch::Sine { slope: 0.375, offset: 0.6, amplitude: 0.125 },
        ])
        .unwrap();
        for d in 1..=8 {
            for (a, b) in cc.realize(d).unwrap() {
                let len = b - a;
                assert!(len >= 4f64.powi(-(d as i32)) * (1.0 - 1e-12));
                assert!(len <= 2f64.powi(-(d as i32)) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn overlapping_branches_rejected() {
        assert!(matches!(
            CookieCutter::affine(&[(0.6, 0.0), (0.5, 0.5)]),
            Err(Error::SeparationViolated(_))
        ));
    }

    #[test]
    fn affine_potential_is_log_expansion() {
        let f = CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)]).unwrap().derivative_potential(1).unwrap();
        assert!((f.evaluate(&[0, 1], 2) - 8f64.ln()).abs() < 1e-14);
    }
}
