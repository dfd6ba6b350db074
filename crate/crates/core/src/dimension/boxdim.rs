#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec::Vec;

use super::cutter::CookieCutter;
use crate::measures::MarkovMeasure;
use crate::numeric::{ls_slope, KahanSum};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BoxEstimate {
    /// `(ε, N(ε))`.
    pub counts: Vec<(f64, u64)>,
    /// Least-squares slope of `log N` against `-log ε`.
    pub fit: f64,
    /// Smallest and largest slope between consecutive grid points.
    pub lower: f64,
    pub upper: f64,
}

/// Minimal number of sets of diameter `ε` covering a union of closed
/// intervals (points are degenerate intervals); greedy left-to-right sweep.
fn cover_count(sorted: &[(f64, f64)], eps: f64) -> u64 {
    // endpoints carry O(1e-16) absolute error from composing branches
    let tol = 1e-9 * eps;
    let mut count = 0u64;
    let mut reach = f64::NEG_INFINITY;
    for &(a, b) in sorted {
        if b <= reach + tol {
            continue;
        }
        let start = if a > reach + tol { a } else { reach };
        let k = ((b - start - tol) / eps).ceil().max(1.0);
        count += k as u64;
        reach = start + k * eps;
    }
    count
}

fn fit(counts: Vec<(f64, u64)>) -> Result<BoxEstimate> {
    if counts.len() < 3 {
        return Err(Error::InvalidArgument("box counting needs at least 3 scales".into()));
    }
    let xs: Vec<f64> = counts.iter().map(|c| -c.0.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|c| (c.1 as f64).ln()).collect();
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for i in 1..xs.len() {
        let s = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        lower = lower.min(s);
        upper = upper.max(s);
    }
    Ok(BoxEstimate {
        fit: ls_slope(&xs, &ys),
        counts,
        lower,
        upper,
    })
}

/// Box-counting dimension of a union of intervals over `epsilon_grid`.
pub fn box_dimension_estimate(set: &[(f64, f64)], epsilon_grid: &[f64]) -> Result<BoxEstimate> {
    if epsilon_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidArgument("scales must be positive".into()));
    }
    if set.is_empty() {
        return Err(Error::InvalidArgument("empty set".into()));
    }
    let mut sorted = set.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    fit(epsilon_grid.iter().map(|&e| (e, cover_count(&sorted, e))).collect())
}

/// Ledrappier-type dimension of `μ` on the repeller: at each `ε`, the
/// cylinders of the first depth whose intervals all have length `≤ ε` are
/// taken in decreasing measure until mass `1 - δ`, and their intervals are
/// box-counted at scale `ε`.
pub fn ledrappier_dimension_estimate(
    cc: &CookieCutter,
    mu: &MarkovMeasure,
    delta: f64,
    epsilon_grid: &[f64],
) -> Result<BoxEstimate> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if mu.alphabet_size() != cc.branch_count() {
        return Err(Error::InvalidMeasure("measure alphabet differs from branch count".into()));
    }
    let mut counts = Vec::with_capacity(epsilon_grid.len());
    for &eps in epsilon_grid {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument("scales must be positive".into()));
        }
        let mut depth = 1;
        let cells = loop {
            let iv = cc.realize(depth)?;
            if iv.iter().all(|(a, b)| b - a <= eps * (1.0 + 1e-12)) {
                break iv;
            }
            depth += 1;
        };
        let k = cc.branch_count();
        let mut word = alloc::vec![0u8; depth];
        let mut items: Vec<(f64, (f64, f64))> = cells
            .into_iter()
            .enumerate()
            .map(|(mut code, iv)| {
                for slot in word.iter_mut().rev() {
                    *slot = (code % k) as u8;
                    code /= k;
                }
                (mu.cylinder_measure(&word), iv)
            })
            .collect();
        items.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut mass = KahanSum::default();
        let mut chosen = Vec::new();
        for (m, iv) in items {
            if mass.value() >= 1.0 - delta - 1e-12 {
                break;
            }
            mass.add(m);
            chosen.push(iv);
        }
        chosen.sort_by(|x, y| x.0.total_cmp(&y.0));
        counts.push((eps, cover_count(&chosen, eps)));
    }
    fit(counts)
}
