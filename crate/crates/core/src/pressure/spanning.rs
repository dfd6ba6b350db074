#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{cylinder_weight, tail_stats, validate_range, BallWeighting, PerN, PressureEstimate, PressureKind};
use crate::measures::MarkovMeasure;
use crate::numeric::{ln_multinomial, KahanSum, LogSumExp};
use crate::potentials::PotentialSequence;
use crate::symbolic::SymbolicSystem;
use crate::{Error, Result};

/// `[LP relaxation, greedy]` bracket for the minimal weight of an
/// `(n, ε, δ)`-spanning set, in log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanningBracket {
    pub log_lower: f64,
    pub log_upper: f64,
    /// Cylinders in the greedy selection (as a float: it can exceed `u64`).
    pub greedy_count: f64,
    /// Whether the symbol-count (type class) reduction was used.
    pub type_classes: bool,
}

/// A group of `exp(log_count)` cylinders sharing weight and measure.
struct Item {
    log_w: f64,
    log_mu: f64,
    log_count: f64,
}

impl Item {
    fn ratio(&self) -> f64 {
        self.log_w - self.log_mu
    }
}

/// Min-knapsack: minimise `Σ w_c` subject to `Σ μ_c ≥ 1 - δ`.
///
/// Items must already be in tie-broken order; the sort here is stable.
fn knapsack(mut items: Vec<Item>, delta: f64) -> (f64, f64, f64) {
    items.sort_by(|a, b| a.ratio().partial_cmp(&b.ratio()).unwrap_or(Ordering::Equal));
    let target = 1.0 - delta;
    let mut mass = KahanSum::default();
    let mut chosen = LogSumExp::new();
    let mut count = 0.0;
    for it in &items {
        let class_mass = (it.log_count + it.log_mu).exp();
        let remaining = target - mass.value();
        if class_mass < remaining - 1e-15 * target {
            chosen.add(it.log_count + it.log_w);
            mass.add(class_mass);
            count += it.log_count.exp();
            continue;
        }
        // Last item, possibly split.
        let lr = remaining.max(0.0).ln() - it.log_mu;
        let lr = lr.min(it.log_count);
        let mut lp = chosen;
        lp.add(lr + it.log_w);
        // Past e^40 cylinders, rounding up to a whole one is invisible.
        let log_whole = if lr < 40.0 {
            lr.exp().ceil().min(it.log_count.exp().round().max(1.0)).ln()
        } else {
            lr
        };
        let mut greedy = chosen;
        greedy.add(log_whole + it.log_w);
        return (lp.value(), greedy.value(), count + log_whole.exp());
    }
    // Rounding left the target unreached: everything is selected.
    (chosen.value(), chosen.value(), count)
}

/// Whether the symbol-count reduction is exact for this instance.
fn type_classes_apply(
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    mu: &MarkovMeasure,
    m: usize,
) -> bool {
    m == 0 && sys.is_full_shift() && mu.bernoulli_weights().is_some() && pot.is_exchangeable()
}

/// All compositions of `n` into `k` parts, in decreasing lexicographic order,
/// which is the order of their lexicographically least words.
fn compositions(n: usize, k: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if cur.len() == k - 1 {
        let used: usize = cur.iter().sum();
        cur.push(n - used);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    let used: usize = cur.iter().sum();
    for c in (0..=n - used).rev() {
        cur.push(c);
        compositions(n, k, out, cur);
        cur.pop();
    }
}

/// Bracket on `P_μ(T, F, n, ε, δ)`: greedy selection by weight-to-measure
/// ratio (upper) and the linear relaxation (lower), over cylinder-aligned
/// spanning sets. Ties are broken toward the lexicographically smaller cylinder.
///
/// For Bernoulli measures on a full shift with a potential depending only on
/// symbol counts (and `m = 0`), cylinders are grouped by type class, which
/// makes `n` in the thousands feasible.
#[allow(clippy::too_many_arguments)]
pub fn measure_pressure_spanning(
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    mu: &MarkovMeasure,
    n: usize,
    m: usize,
    delta: f64,
    weighting: BallWeighting,
    cap: u64,
) -> Result<SpanningBracket> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    mu.check_support(sys)?;
    let use_classes = type_classes_apply(sys, pot, mu, m);
    let items = if use_classes {
        class_items(pot, mu, n)
    } else {
        let mut items = Vec::new();
        let mut err = None;
        sys.for_each_word(n + m, cap, |w| {
            let log_mu = mu.log_cylinder_measure(w);
            if log_mu == f64::NEG_INFINITY {
                return;
            }
            match cylinder_weight(pot, sys, w, n, weighting) {
                Ok(log_w) => items.push(Item {
                    log_w,
                    log_mu,
                    log_count: 0.0,
                }),
                Err(e) => err = Some(e),
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        items
    };
    let (log_lower, log_upper, greedy_count) = knapsack(items, delta);
    Ok(SpanningBracket {
        log_lower,
        log_upper,
        greedy_count,
        type_classes: use_classes,
    })
}

fn class_items(pot: &PotentialSequence, mu: &MarkovMeasure, n: usize) -> Vec<Item> {
    let p = mu.bernoulli_weights().unwrap_or(&[]);
    let k = p.len();
    let mut comps = Vec::new();
    compositions(n, k, &mut comps, &mut Vec::new());
    comps
        .into_iter()
        .filter_map(|c| {
            let mut log_mu = 0.0;
            for (a, &ca) in c.iter().enumerate() {
                if ca > 0 {
                    if p[a] == 0.0 {
                        return None;
                    }
                    log_mu += ca as f64 * p[a].ln();
                }
            }
            Some(Item {
                log_w: pot.evaluate_counts(&c)?,
                log_mu,
                log_count: ln_multinomial(&c),
            })
        })
        .collect()
}

/// Measure-theoretic pressure over `n_range`.
///
/// The per-`n` value is the log-scale midpoint of the `[LP, greedy]` bracket.
/// `value` is the limsup-style tail (max over the last quarter); the
/// liminf-style tail is reported alongside. The bracket spans the per-`n`
/// bounds over the same tail and is not a rigorous bound on the limit.
#[allow(clippy::too_many_arguments)]
pub fn measure_pressure(
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    mu: &MarkovMeasure,
    m: usize,
    delta: f64,
    n_range: &[usize],
    weighting: BallWeighting,
    cap: u64,
) -> Result<PressureEstimate> {
    validate_range(n_range)?;
    let mut per_n = Vec::with_capacity(n_range.len());
    for &n in n_range {
        let b = measure_pressure_spanning(sys, pot, mu, n, m, delta, weighting, cap)?;
        let nf = n as f64;
        per_n.push(PerN {
            n,
            value: 0.5 * (b.log_lower + b.log_upper) / nf,
            lower: b.log_lower / nf,
            upper: b.log_upper / nf,
        });
    }
    let (limsup, liminf) = tail_stats(&per_n);
    let t = crate::numeric::tail_len(per_n.len());
    let tail = &per_n[per_n.len() - t..];
    let lower = tail.iter().map(|p| p.lower).fold(f64::INFINITY, f64::min);
    let upper = tail.iter().map(|p| p.upper).fold(f64::NEG_INFINITY, f64::max);
    Ok(PressureEstimate {
        kind: PressureKind::MeasureSpanning,
        mode: pot.mode(),
        weighting,
        m,
        delta: Some(delta),
        value: limsup,
        lower,
        upper,
        certified: false,
        per_n,
        limsup_tail: limsup,
        liminf_tail: liminf,
    })
}
