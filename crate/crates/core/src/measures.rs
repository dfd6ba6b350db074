//! Stationary Markov measures: cylinder masses, entropy, orbit sampling,
//! Kingman limits and local-entropy estimators.

#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::numeric::{mean_and_stderr, KahanSum};
use crate::potentials::{Mode, PotentialSequence};
use crate::rng::Stream;
use crate::symbolic::SymbolicSystem;
use crate::{Error, Result, DEFAULT_WORD_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    k: usize,
    p: Vec<f64>,
    pi: Vec<f64>,
    log_p: Vec<f64>,
    log_pi: Vec<f64>,
}

/// Stationary vector of the row-stochastic `p` (row-major, `k × k`).
pub fn stationary_vector(p: &[f64], k: usize) -> Result<Vec<f64>> {
    let adj: Vec<bool> = p.iter().map(|&x| x > 0.0).collect();
    if !crate::linalg::strongly_connected(&adj, k) {
        return Err(Error::NonErgodic);
    }
    // The lazy chain (I + P)/2 is aperiodic with the same stationary law.
    let mut pi = vec![1.0 / k as f64; k];
    for _ in 0..1_000_000 {
        let mut next = vec![0.0; k];
        for i in 0..k {
            for j in 0..k {
                next[j] += pi[i] * p[i * k + j];
            }
        }
        let mut resid = 0.0f64;
        for j in 0..k {
            resid = resid.max((next[j] - pi[j]).abs());
            next[j] = 0.5 * (next[j] + pi[j]);
        }
        let s: f64 = next.iter().sum();
        for v in &mut next {
            *v /= s;
        }
        pi = next;
        if resid < 1e-13 {
            break;
        }
    }
    Ok(pi)
}

impl MarkovMeasure {
    /// Markov measure with transition rows `rows`; the support must be irreducible.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidMeasure("empty matrix".into()));
        }
        let mut p = Vec::with_capacity(k * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidMeasure(alloc::format!("row {i} has wrong length")));
            }
            if row.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
                return Err(Error::InvalidMeasure(alloc::format!("row {i} has a negative entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidMeasure(alloc::format!("row {i} sums to {s}")));
            }
            p.extend(row.iter().map(|x| x / s));
        }
        let pi = stationary_vector(&p, k)?;
        Ok(Self {
            k,
            log_p: p.iter().map(|x| x.ln()).collect(),
            log_pi: pi.iter().map(|x| x.ln()).collect(),
            p,
            pi,
        })
    }

    pub fn bernoulli(probs: &[f64]) -> Result<Self> {
        Self::new(&vec![probs.to_vec(); probs.len()])
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn transition(&self, a: u8, b: u8) -> f64 {
        self.p[a as usize * self.k + b as usize]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.k).map(|r| r.to_vec()).collect()
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    /// `Some(p)` when every row equals `p`.
    pub fn bernoulli_weights(&self) -> Option<&[f64]> {
        let first = &self.p[..self.k];
        self.p
            .chunks(self.k)
            .all(|r| r.iter().zip(first).all(|(a, b)| (a - b).abs() < 1e-15))
            .then_some(first)
    }

    /// Positive transitions must be allowed by the system.
    pub fn check_support(&self, sys: &SymbolicSystem) -> Result<()> {
        if sys.alphabet_size() != self.k {
            return Err(Error::InvalidMeasure("alphabet size differs from the system".into()));
        }
        for a in 0..self.k as u8 {
            for b in 0..self.k as u8 {
                if self.transition(a, b) > 0.0 && !sys.allows(a, b) {
                    return Err(Error::InvalidMeasure(alloc::format!(
                        "transition {a}→{b} has mass but is forbidden"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn cylinder_measure(&self, w: &[u8]) -> f64 {
        self.log_cylinder_measure(w).exp()
    }

    /// `log μ([w])`, `-inf` for null cylinders.
    pub fn log_cylinder_measure(&self, w: &[u8]) -> f64 {
        let Some((&first, _)) = w.split_first() else {
            return 0.0;
        };
        let mut l = self.log_pi[first as usize];
        for p in w.windows(2) {
            l += self.log_p[p[0] as usize * self.k + p[1] as usize];
        }
        l
    }

    /// `log μ` of the cylinder obtained by appending `b` to a word ending in `a`.
    #[inline]
    pub fn log_step(&self, last: Option<u8>, b: u8) -> f64 {
        match last {
            None => self.log_pi[b as usize],
            Some(a) => self.log_p[a as usize * self.k + b as usize],
        }
    }

    /// `-Σ_i π_i Σ_j P_ij log P_ij`.
    pub fn entropy_exact(&self) -> f64 {
        let mut h = 0.0;
        for i in 0..self.k {
            for j in 0..self.k {
                let x = self.p[i * self.k + j];
                if x > 0.0 {
                    h -= self.pi[i] * x * x.ln();
                }
            }
        }
        h
    }

    /// Stationary orbit segment of length `n`, from stream 0 of `seed`.
    pub fn sample_orbit(&self, n: usize, seed: u64) -> Vec<u8> {
        self.sample_orbit_stream(n, seed, 0)
    }

    pub fn sample_orbit_stream(&self, n: usize, seed: u64, stream: u64) -> Vec<u8> {
        let mut rng = Stream::new(seed, stream);
        let mut w = Vec::with_capacity(n);
        if n == 0 {
            return w;
        }
        w.push(rng.categorical(&self.pi) as u8);
        for i in 1..n {
            let a = w[i - 1] as usize;
            w.push(rng.categorical(&self.p[a * self.k..(a + 1) * self.k]) as u8);
        }
        w
    }

    /// `∫ φ dμ` for a Birkhoff potential, exactly.
    pub fn integrate_birkhoff(&self, sys: &SymbolicSystem, pot: &PotentialSequence) -> Result<f64> {
        let l = pot.locality().ok_or_else(|| {
            Error::InvalidPotential("integrate_birkhoff needs a Birkhoff potential".into())
        })?;
        let mut s = KahanSum::default();
        sys.for_each_word(l, DEFAULT_WORD_CAP, |w| {
            let m = self.cylinder_measure(w);
            if m > 0.0 {
                s.add(m * pot.evaluate(w, 1));
            }
        })?;
        Ok(s.value())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KingmanParams {
    pub n_exact: usize,
    pub mc_orbits: usize,
    pub mc_length: usize,
    pub seed: u64,
    pub cap: u64,
}

impl Default for KingmanParams {
    fn default() -> Self {
        Self {
            n_exact: 16,
            mc_orbits: 64,
            mc_length: 4096,
            seed: 2025,
            cap: DEFAULT_WORD_CAP,
        }
    }
}

/// Exact finite-`n` bounds plus a Monte Carlo estimate of `F_*(μ)` (or `Φ_*(μ)`).
#[derive(Debug, Clone, PartialEq)]
pub struct KingmanBracket {
    pub mode: Mode,
    /// `(n, E[f_n]/n)`: upper bounds for subadditive, lower bounds for supadditive.
    pub upper_bounds: Vec<(usize, f64)>,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl KingmanBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `E[f_n]` for `n = 1..=n_max` by a single walk over depth `n_max + lookahead`.
pub fn exact_expectations(
    pot: &PotentialSequence,
    mu: &MarkovMeasure,
    sys: &SymbolicSystem,
    n_max: usize,
    cap: u64,
) -> Result<Vec<f64>> {
    let la = pot.lookahead();
    let depth = n_max + la;
    sys.check_cap(depth, cap)?;
    let mut sums = vec![KahanSum::default(); n_max + 1];
    sys.walk(depth, (pot.accumulator(), 0.0f64), |(acc, lm), w| {
        let last = w.len().checked_sub(2).map(|i| w[i]);
        let lm = lm + mu.log_step(last, *w.last().unwrap());
        if lm == f64::NEG_INFINITY {
            return None;
        }
        let mut acc = acc.clone();
        acc.push(*w.last().unwrap());
        if let Some(v) = acc.current() {
            sums[acc.steps()].add(lm.exp() * v);
        }
        Some((acc, lm))
    });
    Ok(sums[1..].iter().map(KahanSum::value).collect())
}

/// Kingman limit of `F` under `μ`.
///
/// Subadditive: the exact `(1/n) E[f_n]` are upper bounds of the infimum,
/// the long-orbit average is a point estimate; the bracket is
/// `[mc - 3σ, min_n E[f_n]/n]`, and the reported value is the exact bound
/// unless the orbit average sits more than 3σ below it. Supadditive mirrors
/// this; additive limits are exact.
pub fn kingman_limit(
    pot: &PotentialSequence,
    mu: &MarkovMeasure,
    sys: &SymbolicSystem,
    params: &KingmanParams,
) -> Result<KingmanBracket> {
    if params.n_exact == 0 || params.mc_orbits == 0 || params.mc_length == 0 {
        return Err(Error::InvalidArgument("kingman parameters must be positive".into()));
    }
    mu.check_support(sys)?;
    let exp = exact_expectations(pot, mu, sys, params.n_exact, params.cap)?;
    let upper_bounds: Vec<(usize, f64)> = exp
        .iter()
        .enumerate()
        .map(|(i, e)| (i + 1, e / (i + 1) as f64))
        .collect();
    let la = pot.lookahead();
    let samples: Vec<f64> = (0..params.mc_orbits)
        .map(|i| {
            let w = mu.sample_orbit_stream(params.mc_length + la, params.seed, i as u64);
            pot.evaluate(&w, params.mc_length) / params.mc_length as f64
        })
        .collect();
    let (mc, se) = mean_and_stderr(&samples);
    let best_inf = upper_bounds.iter().map(|u| u.1).fold(f64::INFINITY, f64::min);
    let best_sup = upper_bounds.iter().map(|u| u.1).fold(f64::NEG_INFINITY, f64::max);
    let (value, lower, upper) = match pot.mode() {
        Mode::Additive => {
            let v = upper_bounds[0].1;
            (v, v, v)
        }
        // The exact bound wins whenever the orbit average is within 3σ of it.
        Mode::Subadditive => (
            if mc + 3.0 * se >= best_inf { best_inf } else { mc },
            (mc - 3.0 * se).min(best_inf),
            best_inf,
        ),
        Mode::Supadditive => (
            if mc - 3.0 * se <= best_sup { best_sup } else { mc },
            best_sup,
            (mc + 3.0 * se).max(best_sup),
        ),
    };
    Ok(KingmanBracket {
        mode: pot.mode(),
        upper_bounds,
        mc_estimate: mc,
        mc_stderr: se,
        value,
        lower,
        upper,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrinKatok {
    /// `(n, -(1/n) log μ(B_n(x, ε)))`; `+inf` for null balls.
    pub per_n: Vec<(usize, f64)>,
    pub tail_mean: f64,
    pub hit_null_ball: bool,
}

/// Local entropy along the prefix `x`; ε enters as the extra depth `m`.
pub fn brin_katok_estimate(
    mu: &MarkovMeasure,
    x: &[u8],
    m: usize,
    n_grid: &[usize],
) -> Result<BrinKatok> {
    if n_grid.is_empty() || n_grid.contains(&0) {
        return Err(Error::InvalidArgument("n_grid must hold positive lengths".into()));
    }
    let mut per_n = Vec::with_capacity(n_grid.len());
    let mut null = false;
    for &n in n_grid {
        let d = n + m;
        if d > x.len() {
            return Err(Error::InvalidArgument("point prefix shorter than n + m".into()));
        }
        let l = mu.log_cylinder_measure(&x[..d]);
        null |= l == f64::NEG_INFINITY;
        per_n.push((n, -l / n as f64));
    }
    let t = crate::numeric::tail_len(per_n.len());
    let tail = &per_n[per_n.len() - t..];
    let tail_mean = tail.iter().map(|p| p.1).sum::<f64>() / t as f64;
    Ok(BrinKatok {
        per_n,
        tail_mean,
        hit_null_ball: null,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatokEstimate {
    /// `(1/n) log N_min`.
    pub rate: f64,
    pub count: u64,
}

/// Minimal number of depth-`(n + m)` cylinders carrying mass `≥ 1 - δ`,
/// found by taking cylinders in decreasing measure (optimal for unit costs).
pub fn katok_entropy_estimate(
    mu: &MarkovMeasure,
    sys: &SymbolicSystem,
    m: usize,
    delta: f64,
    n: usize,
) -> Result<KatokEstimate> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut masses = Vec::new();
    sys.for_each_word(n + m, DEFAULT_WORD_CAP, |w| {
        let x = mu.cylinder_measure(w);
        if x > 0.0 {
            masses.push(x);
        }
    })?;
    masses.sort_by(|a, b| b.total_cmp(a));
    let target = 1.0 - delta;
    let mut s = KahanSum::default();
    let mut count = 0u64;
    for x in masses {
        s.add(x);
        count += 1;
        if s.value() >= target - 1e-12 {
            break;
        }
    }
    Ok(KatokEstimate {
        rate: (count as f64).ln() / n as f64,
        count,
    })
}
