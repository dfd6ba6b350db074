#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use super::{cylinder_weight, tail_stats, validate_range, BallWeighting, PerN, PressureEstimate, PressureKind};
use crate::linalg::perron;
use crate::measures::MarkovMeasure;
use crate::numeric::LogSumExp;
use crate::potentials::{Mode, PotentialSequence};
use crate::symbolic::SymbolicSystem;
use crate::{Error, Result};

/// `log Σ_c exp(w(c))` over the depth-`(n + m)` cylinders, one point per
/// cylinder being a maximal `(n, ε)`-separated set.
pub fn log_partition_sum(
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    n: usize,
    m: usize,
    weighting: BallWeighting,
    cap: u64,
) -> Result<f64> {
    let mut acc = LogSumExp::new();
    let mut err = None;
    sys.for_each_word(n + m, cap, |w| match cylinder_weight(pot, sys, w, n, weighting) {
        Ok(v) => acc.add(v),
        Err(e) => err = Some(e),
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(acc.value()),
    }
}

pub fn partition_sum(
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    n: usize,
    m: usize,
    weighting: BallWeighting,
    cap: u64,
) -> Result<f64> {
    Ok(log_partition_sum(sys, pot, n, m, weighting, cap)?.exp())
}

/// `log Σ_{|w| = n} exp(inf_{[w]} f_n)`.
fn log_inf_partition(sys: &SymbolicSystem, pot: &PotentialSequence, n: usize, cap: u64) -> Result<f64> {
    let mut acc = LogSumExp::new();
    sys.for_each_word(n, cap, |w| acc.add(pot.cylinder_extremes(sys, w, n).0))?;
    Ok(acc.value())
}

/// Topological pressure from separated-set sums over `n_range`.
///
/// The per-`n` values are exact. Rigorous bounds on the limit are used where
/// they exist:
/// * sub/additive potentials with sup weighting (or center weighting that
///   coincides with it): `log P_n` is subadditive, so `min_n (1/n) log P_n` is
///   an upper bound;
/// * additive Birkhoff potentials on a primitive system: concatenation through
///   connecting words of length `g - 1` gives a lower bound;
/// * supadditive potentials on a primitive system: the same concatenation
///   applied to infimum-weighted sums gives a lower bound.
///
/// A side without such a bound falls back to the tail min/max and the
/// estimate is flagged uncertified.
pub fn topological_pressure(
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    m: usize,
    n_range: &[usize],
    weighting: BallWeighting,
    cap: u64,
) -> Result<PressureEstimate> {
    validate_range(n_range)?;
    let la = pot.lookahead();
    let mode = pot.mode();
    let mut per_n = Vec::with_capacity(n_range.len());
    for &n in n_range {
        let v = log_partition_sum(sys, pot, n, m, weighting, cap)? / n as f64;
        per_n.push(PerN {
            n,
            value: v,
            lower: v,
            upper: v,
        });
    }
    let (limsup, liminf) = tail_stats(&per_n);

    let weights_agree = weighting == BallWeighting::Sup || m >= la;
    let upper_cert = (mode.is_sub() && weights_agree).then(|| {
        per_n.iter().map(|p| p.value).fold(f64::INFINITY, f64::min)
    });

    let g = sys.primitivity_exponent();
    let k = sys.alphabet_size() as f64;
    let lower_cert = match (g, mode, pot.birkhoff_table()) {
        (Some(g), Mode::Additive, Some(table)) => {
            let lo = table.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            // Center sums never exceed sup sums, so the bound holds for both.
            let c = la as f64 * (hi - lo) - (g - 1) as f64 * lo;
            per_n
                .iter()
                .map(|p| (p.value * p.n as f64 - m as f64 * k.ln() - c) / (p.n + g - 1) as f64)
                .reduce(f64::max)
        }
        (Some(g), Mode::Supadditive, _) => {
            let mut best = f64::NEG_INFINITY;
            let link = if g > 1 {
                let mut lo = f64::INFINITY;
                sys.for_each_word(g - 1 + la, cap, |w| lo = lo.min(pot.evaluate(w, g - 1)))?;
                lo
            } else {
                0.0
            };
            for &n in n_range {
                let b = log_inf_partition(sys, pot, n, cap)?;
                best = best.max((b + link) / (n + g - 1) as f64);
            }
            Some(best)
        }
        _ => None,
    };
    let upper = upper_cert.unwrap_or(limsup);
    let lower = lower_cert.unwrap_or(liminf).min(upper);
    Ok(PressureEstimate {
        kind: PressureKind::Topological,
        mode,
        weighting,
        m,
        delta: None,
        value: limsup.clamp(lower, upper),
        lower,
        upper,
        certified: upper_cert.is_some() && lower_cert.is_some(),
        per_n,
        limsup_tail: limsup,
        liminf_tail: liminf,
    })
}

/// Weighted transfer matrix of an additive potential on `(L-1)`-blocks
/// (symbols when `L = 1`), with the state words.
fn transfer_matrix(sys: &SymbolicSystem, pot: &PotentialSequence) -> Result<(Vec<f64>, Vec<Vec<u8>>)> {
    let (Some(l), Some(table)) = (pot.locality(), pot.birkhoff_table()) else {
        return Err(Error::InvalidPotential(
            "transfer oracle needs an additive Birkhoff potential".into(),
        ));
    };
    let k = sys.alphabet_size();
    let code = |w: &[u8]| w.iter().fold(0usize, |c, &s| c * k + s as usize);
    if l == 1 {
        let mut mat = vec![0.0; k * k];
        for a in 0..k {
            for b in 0..k {
                if sys.allows(a as u8, b as u8) {
                    mat[a * k + b] = table[a].exp();
                }
            }
        }
        return Ok((mat, (0..k as u8).map(|a| vec![a]).collect()));
    }
    let states = sys.enumerate_words(l - 1)?;
    let s = states.len();
    if s > 4096 {
        return Err(Error::TooLarge {
            depth: l - 1,
            count: s as u64,
            cap: 4096,
        });
    }
    let mut mat = vec![0.0; s * s];
    for (i, u) in states.iter().enumerate() {
        for (j, v) in states.iter().enumerate() {
            let u = u.symbols();
            let v = v.symbols();
            if u[1..] != v[..l - 2] || !sys.allows(u[l - 2], v[l - 2]) {
                continue;
            }
            let mut block = u.to_vec();
            block.push(v[l - 2]);
            mat[i * s + j] = table[code(&block)].exp();
        }
    }
    Ok((mat, states.into_iter().map(|w| w.0).collect()))
}

/// `log` of the Perron root of the weighted transfer matrix.
pub fn transfer_pressure_exact(sys: &SymbolicSystem, pot: &PotentialSequence) -> Result<f64> {
    let (mat, states) = transfer_matrix(sys, pot)?;
    Ok(perron(&mat, states.len(), 1e-14)?.root.ln())
}

/// The equilibrium (Gibbs) Markov measure of an additive potential with `L ≤ 2`.
pub fn equilibrium_markov_measure(sys: &SymbolicSystem, pot: &PotentialSequence) -> Result<MarkovMeasure> {
    if pot.locality().is_some_and(|l| l > 2) {
        return Err(Error::InvalidPotential(
            "equilibrium measure implemented for locality ≤ 2".into(),
        ));
    }
    let (mat, states) = transfer_matrix(sys, pot)?;
    let k = states.len();
    let p = perron(&mat, k, 1e-15)?;
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            let mut row: Vec<f64> = (0..k)
                .map(|b| mat[a * k + b] * p.right[b] / (p.root * p.right[a]))
                .collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= s);
            row
        })
        .collect();
    MarkovMeasure::new(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_WORD_CAP;

    #[test]
    fn counting_sums() {
        let full = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let zero = PotentialSequence::zero(2).unwrap();
        let z = partition_sum(&full, &zero, 10, 0, BallWeighting::Sup, DEFAULT_WORD_CAP).unwrap();
        assert!((z - 1024.0).abs() < 1e-9);
        let golden = SymbolicSystem::golden_mean(0.5).unwrap();
        let z = partition_sum(&golden, &zero, 3, 0, BallWeighting::Sup, DEFAULT_WORD_CAP).unwrap();
        assert!((z - 5.0).abs() < 1e-12);
    }

    #[test]
    fn binomial_expansion() {
        let full = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let f = PotentialSequence::birkhoff(2, 1, vec![1.5f64.ln(), 2.5f64.ln()]).unwrap();
        for n in 1..=10 {
            let z = partition_sum(&full, &f, n, 0, BallWeighting::Center, DEFAULT_WORD_CAP).unwrap();
            assert!((z / 4f64.powi(n as i32) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn oracles() {
        let full = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let f = PotentialSequence::birkhoff(2, 1, vec![0.0, 2f64.ln()]).unwrap();
        assert!((transfer_pressure_exact(&full, &f).unwrap() - 3f64.ln()).abs() < 1e-12);
        let golden = SymbolicSystem::golden_mean(0.5).unwrap();
        let zero = PotentialSequence::zero(2).unwrap();
        let gm = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((transfer_pressure_exact(&golden, &zero).unwrap() - gm).abs() < 1e-12);
        let c = PotentialSequence::constant(2, -0.3 * 3f64.ln()).unwrap();
        assert!((transfer_pressure_exact(&full, &c).unwrap() - (2f64.ln() - 0.3 * 3f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn block_states_match_symbol_states() {
        let golden = SymbolicSystem::golden_mean(0.5).unwrap();
        let f1 = PotentialSequence::birkhoff(2, 1, vec![0.3, -0.2]).unwrap();
        let f2 = PotentialSequence::birkhoff_fn(2, 2, |b| if b[0] == 0 { 0.3 } else { -0.2 }).unwrap();
        let a = transfer_pressure_exact(&golden, &f1).unwrap();
        let b = transfer_pressure_exact(&golden, &f2).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn golden_bracket_contains_oracle() {
        let golden = SymbolicSystem::golden_mean(0.5).unwrap();
        let zero = PotentialSequence::zero(2).unwrap();
        let ns: Vec<usize> = (1..=16).collect();
        let p = topological_pressure(&golden, &zero, 0, &ns, BallWeighting::Sup, DEFAULT_WORD_CAP).unwrap();
        let gm = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(p.certified && p.lower <= gm && gm <= p.upper, "{p:?}");
    }

    #[test]
    fn equilibrium_of_moran_weights() {
        let full = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let s = 0.5;
        let f = PotentialSequence::birkhoff(2, 1, vec![-s * 2f64.ln(), -s * 4f64.ln()]).unwrap();
        let mu = equilibrium_markov_measure(&full, &f).unwrap();
        let z = 2f64.powf(-s) + 4f64.powf(-s);
        assert!((mu.stationary()[0] - 2f64.powf(-s) / z).abs() < 1e-12);
        assert!(mu.bernoulli_weights().is_some());
    }
}
