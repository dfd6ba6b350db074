//! Subadditive, supadditive and additive potential sequences on words.
//!
//! A potential is either a Birkhoff sum of a function of `L`-blocks, or the
//! log norm / log minimal norm of a matrix cocycle, times a real factor.

#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{LogProduct, SmallMatrix};
use crate::rng::Stream;
use crate::symbolic::{Point, SymbolicSystem};
use crate::{Error, Result, DEFAULT_WORD_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Subadditive,
    Supadditive,
    Additive,
}

impl Mode {
    /// Mode of `c · F` for `c < 0`.
    pub fn flipped(self) -> Mode {
        match self {
            Mode::Subadditive => Mode::Supadditive,
            Mode::Supadditive => Mode::Subadditive,
            Mode::Additive => Mode::Additive,
        }
    }

    /// Subadditive or additive: limits are infima and tails use limsup.
    pub fn is_sub(self) -> bool {
        !matches!(self, Mode::Supadditive)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Subadditive => "subadditive",
            Mode::Supadditive => "supadditive",
            Mode::Additive => "additive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Birkhoff,
    CocycleNorm,
    CocycleMinNorm,
}

#[derive(Debug, Clone, PartialEq)]
enum Base {
    Birkhoff { locality: usize, table: Vec<f64> },
    CocycleNorm(Vec<SmallMatrix>),
    CocycleMinNorm(Vec<SmallMatrix>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSequence {
    k: usize,
    base: Base,
    scale: f64,
    mode: Mode,
    commuting: bool,
}

impl PotentialSequence {
    /// `f_n(x) = Σ_{i<n} φ(x_i … x_{i+L-1})` with `table` indexed by the
    /// `L`-block read as a base-`k` number (most significant symbol first).
    pub fn birkhoff(k: usize, locality: usize, table: Vec<f64>) -> Result<Self> {
        if locality == 0 {
            return Err(Error::InvalidPotential("locality must be at least 1".into()));
        }
        let expected = k
            .checked_pow(locality as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::InvalidPotential("locality too large".into()))?;
        if table.len() != expected {
            return Err(Error::InvalidPotential(alloc::format!(
                "table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if table.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite table entry".into()));
        }
        Ok(Self {
            k,
            base: Base::Birkhoff { locality, table },
            scale: 1.0,
            mode: Mode::Additive,
            commuting: true,
        })
    }

    /// Birkhoff potential built from a function of the `L`-block.
    pub fn birkhoff_fn(k: usize, locality: usize, f: impl Fn(&[u8]) -> f64) -> Result<Self> {
        let size = k.pow(locality as u32);
        let mut block = vec![0u8; locality];
        let table = (0..size)
            .map(|mut code| {
                for slot in block.iter_mut().rev() {
                    *slot = (code % k) as u8;
                    code /= k;
                }
                f(&block)
            })
            .collect();
        Self::birkhoff(k, locality, table)
    }

    pub fn constant(k: usize, c: f64) -> Result<Self> {
        Self::birkhoff(k, 1, vec![c; k])
    }

    pub fn zero(k: usize) -> Result<Self> {
        Self::constant(k, 0.0)
    }

    /// `f_n(x) = log ‖A_{x_{n-1}} ⋯ A_{x_0}‖`, subadditive.
    pub fn cocycle_norm(matrices: Vec<SmallMatrix>) -> Result<Self> {
        let commuting = validate_cocycle(&matrices)?;
        Ok(Self {
            k: matrices.len(),
            base: Base::CocycleNorm(matrices),
            scale: 1.0,
            mode: Mode::Subadditive,
            commuting,
        })
    }

    /// `φ_n(x) = log m(A_{x_{n-1}} ⋯ A_{x_0})` with `m` the smallest singular value, supadditive.
    pub fn cocycle_min_norm(matrices: Vec<SmallMatrix>) -> Result<Self> {
        let commuting = validate_cocycle(&matrices)?;
        Ok(Self {
            k: matrices.len(),
            base: Base::CocycleMinNorm(matrices),
            scale: 1.0,
            mode: Mode::Supadditive,
            commuting,
        })
    }

    /// `c · inner`; a negative factor swaps sub- and supadditivity.
    pub fn scaled(c: f64, inner: &PotentialSequence) -> Self {
        let mut out = inner.clone();
        out.scale *= c;
        if c < 0.0 {
            out.mode = out.mode.flipped();
        }
        out
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn kind(&self) -> Kind {
        match self.base {
            Base::Birkhoff { .. } => Kind::Birkhoff,
            Base::CocycleNorm(_) => Kind::CocycleNorm,
            Base::CocycleMinNorm(_) => Kind::CocycleMinNorm,
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    /// Block length `L` of a Birkhoff potential; `None` for cocycles.
    pub fn locality(&self) -> Option<usize> {
        match self.base {
            Base::Birkhoff { locality, .. } => Some(locality),
            _ => None,
        }
    }

    /// Symbols beyond `n` that `f_n` reads: `L - 1` for Birkhoff, 0 for cocycles.
    pub fn lookahead(&self) -> usize {
        self.locality().map_or(0, |l| l - 1)
    }

    /// Base table of a Birkhoff potential, already multiplied by the scale.
    pub fn birkhoff_table(&self) -> Option<Vec<f64>> {
        match &self.base {
            Base::Birkhoff { table, .. } => Some(table.iter().map(|v| v * self.scale).collect()),
            _ => None,
        }
    }

    pub fn matrices(&self) -> Option<&[SmallMatrix]> {
        match &self.base {
            Base::CocycleNorm(m) | Base::CocycleMinNorm(m) => Some(m),
            Base::Birkhoff { .. } => None,
        }
    }

    /// True when `f_n(x)` depends only on the symbol counts of `x_0 … x_{n-1}`.
    pub fn is_exchangeable(&self) -> bool {
        match &self.base {
            Base::Birkhoff { locality, .. } => *locality == 1,
            _ => self.commuting,
        }
    }

    /// `f_n` on any word whose symbol counts are `counts`; `None` unless exchangeable.
    pub fn evaluate_counts(&self, counts: &[usize]) -> Option<f64> {
        if !self.is_exchangeable() || counts.len() != self.k {
            return None;
        }
        let mut acc = self.accumulator();
        for (a, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                acc.push(a as u8);
            }
        }
        acc.current()
    }

    pub fn accumulator(&self) -> Accumulator<'_> {
        let state = match &self.base {
            Base::Birkhoff { .. } => AccState::Birkhoff { sum: 0.0, code: 0 },
            Base::CocycleNorm(m) | Base::CocycleMinNorm(m) => {
                AccState::Cocycle(LogProduct::identity(m[0].dim()))
            }
        };
        Accumulator {
            pot: self,
            len: 0,
            state,
        }
    }

    /// `f_n(x)` where `word` holds at least the first `n + lookahead` symbols of `x`.
    pub fn evaluate(&self, word: &[u8], n: usize) -> f64 {
        let need = n + self.lookahead();
        assert!(word.len() >= need, "evaluate: word shorter than n + lookahead");
        let mut acc = self.accumulator();
        for &s in &word[..need] {
            acc.push(s);
        }
        acc.current().unwrap_or(0.0)
    }

    pub fn evaluate_point(&self, x: &Point, n: usize) -> f64 {
        self.evaluate(&x.take(n + self.lookahead()), n)
    }

    /// `(inf, sup)` of `f_n` over the cylinder `[word]`, for `word.len() ≥ n`.
    ///
    /// Exact: only the missing lookahead symbols are enumerated.
    pub fn cylinder_extremes(&self, sys: &SymbolicSystem, word: &[u8], n: usize) -> (f64, f64) {
        let need = n + self.lookahead();
        if word.len() >= need {
            let v = self.evaluate(word, n);
            return (v, v);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut buf = word.to_vec();
        extend_all(sys, &mut buf, need, &mut |w| {
            let v = self.evaluate(w, n);
            lo = lo.min(v);
            hi = hi.max(v);
        });
        (lo, hi)
    }
}

fn extend_all(sys: &SymbolicSystem, buf: &mut Vec<u8>, need: usize, f: &mut dyn FnMut(&[u8])) {
    if buf.len() == need {
        f(buf);
        return;
    }
    for s in 0..sys.alphabet_size() as u8 {
        if buf.last().is_none_or(|&l| sys.allows(l, s)) {
            buf.push(s);
            extend_all(sys, buf, need, f);
            buf.pop();
        }
    }
}

fn validate_cocycle(matrices: &[SmallMatrix]) -> Result<bool> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::InvalidPotential("cocycle needs at least one matrix".into()))?;
    let dim = first.dim();
    for (i, a) in matrices.iter().enumerate() {
        if a.dim() != dim {
            return Err(Error::InvalidPotential("cocycle matrices differ in size".into()));
        }
        let det = a.det().abs();
        if !(det > 1e-12 * a.max_abs().powi(dim as i32)) {
            return Err(Error::InvalidPotential(alloc::format!(
                "matrix {i} is singular"
            )));
        }
    }
    let mut commuting = true;
    for a in matrices {
        for b in matrices {
            let ab = a.mul(b);
            let ba = b.mul(a);
            let scale = a.max_abs() * b.max_abs();
            for i in 0..dim {
                for j in 0..dim {
                    if (ab.get(i, j) - ba.get(i, j)).abs() > 1e-12 * scale {
                        commuting = false;
                    }
                }
            }
        }
    }
    Ok(commuting)
}

#[derive(Debug, Clone)]
enum AccState {
    Birkhoff { sum: f64, code: usize },
    Cocycle(LogProduct),
}

/// Incremental evaluator: after pushing `x_0 … x_{j+L-2}` it yields `f_j(x)`.
#[derive(Debug, Clone)]
pub struct Accumulator<'a> {
    pot: &'a PotentialSequence,
    len: usize,
    state: AccState,
}

impl Accumulator<'_> {
    pub fn push(&mut self, s: u8) {
        self.len += 1;
        match (&mut self.state, &self.pot.base) {
            (AccState::Birkhoff { sum, code }, Base::Birkhoff { locality, table }) => {
                let modulus = table.len();
                *code = (*code * self.pot.k + s as usize) % modulus;
                if self.len >= *locality {
                    *sum += table[*code];
                }
            }
            (AccState::Cocycle(p), Base::CocycleNorm(m) | Base::CocycleMinNorm(m)) => {
                p.push_left(&m[s as usize]);
            }
            _ => unreachable!("accumulator state matches its potential"),
        }
    }

    /// Number of complete terms `j`, i.e. the `n` for which `current` is `f_n`.
    pub fn steps(&self) -> usize {
        self.len.saturating_sub(self.pot.lookahead())
    }

    /// `f_j` for the symbols pushed so far; `None` before the first full block.
    pub fn current(&self) -> Option<f64> {
        if self.steps() == 0 {
            return None;
        }
        let raw = match (&self.state, &self.pot.base) {
            (AccState::Birkhoff { sum, .. }, _) => *sum,
            (AccState::Cocycle(p), Base::CocycleNorm(_)) => p.log_singular_extremes().0,
            (AccState::Cocycle(p), _) => p.log_singular_extremes().1,
        };
        Some(self.pot.scale * raw)
    }

    /// `log |det|` of the cocycle product so far (unscaled); `None` for Birkhoff sums.
    pub fn log_abs_det(&self) -> Option<f64> {
        match &self.state {
            AccState::Cocycle(p) => Some(p.log_abs_det()),
            AccState::Birkhoff { .. } => None,
        }
    }
}

/// How exhaustive word sweeps behave when the word count exceeds `cap`.
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub cap: u64,
    /// Random words to test instead of failing, if any.
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_WORD_CAP,
            samples: None,
            seed: 0,
        }
    }
}

fn sweep(
    sys: &SymbolicSystem,
    depth: usize,
    cfg: &SweepConfig,
    mut f: impl FnMut(&[u8]),
) -> Result<(usize, bool)> {
    match sys.check_cap(depth, cfg.cap) {
        Ok(count) => {
            sys.for_each_word(depth, cfg.cap, &mut f)?;
            Ok((count as usize, true))
        }
        Err(Error::TooLarge { .. }) if cfg.samples.is_some() => {
            let n = cfg.samples.unwrap_or(0);
            let mut rng = Stream::new(cfg.seed, 0);
            for _ in 0..n {
                f(&sys.random_word(depth, &mut rng));
            }
            Ok((n, false))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCheck {
    /// Max of `f_{n+m}(x) - f_n(x) - f_m(T^n x)` (sub/additive) or its min (supadditive).
    pub defect: f64,
    pub words_tested: usize,
    pub exhaustive: bool,
}

impl ModeCheck {
    /// Whether the declared mode holds up to `tol`.
    pub fn holds(&self, mode: Mode, tol: f64) -> bool {
        match mode {
            Mode::Subadditive => self.defect <= tol,
            Mode::Supadditive => self.defect >= -tol,
            Mode::Additive => self.defect.abs() <= tol,
        }
    }
}

/// Sweeps `f_{n+m}(x) - f_n(x) - f_m(T^n x)` over all `n + m ≤ n_max`.
pub fn check_mode(
    pot: &PotentialSequence,
    sys: &SymbolicSystem,
    n_max: usize,
    cfg: &SweepConfig,
) -> Result<ModeCheck> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("check_mode needs n_max ≥ 2".into()));
    }
    let depth = n_max + pot.lookahead();
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    let (tested, exhaustive) = sweep(sys, depth, cfg, |w| {
        let prefix = prefix_values(pot, w, n_max);
        for n in 1..n_max {
            let shifted = prefix_values(pot, &w[n..], n_max - n);
            for m in 1..=n_max - n {
                let d = prefix[n + m] - prefix[n] - shifted[m];
                hi = hi.max(d);
                lo = lo.min(d);
            }
        }
    })?;
    let defect = if pot.mode() == Mode::Supadditive { lo } else { hi };
    Ok(ModeCheck {
        defect,
        words_tested: tested,
        exhaustive,
    })
}

/// `[0, f_1(w), …, f_n(w)]`.
fn prefix_values(pot: &PotentialSequence, w: &[u8], n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = pot.accumulator();
    for &s in &w[..n + pot.lookahead()] {
        acc.push(s);
        if let Some(v) = acc.current() {
            out.push(v);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockBoundReport {
    pub k: usize,
    /// `max_{1 ≤ j ≤ 2k} max |f_j|` over enumerated words.
    pub c1: f64,
    /// `4 · c1`.
    pub c: f64,
    /// Largest `f_n(x) - Σ_{i<n} f_k(T^i x)/k - C` (or the mirrored quantity); ≤ 0 when the bound holds.
    pub max_violation: f64,
    pub words_tested: usize,
}

/// Computes the block constant `C = 4 C1` and checks
/// `f_n(x) ≤ (1/k) Σ_{i<n} f_k(T^i x) + C` for all `n ≤ n_max`.
///
/// Supadditive potentials are checked in the mirrored direction
/// `φ_n(x) ≥ (1/k) Σ_{i<n} φ_k(T^i x) - C`; additive ones in both.
pub fn block_inequality_constant(
    pot: &PotentialSequence,
    sys: &SymbolicSystem,
    k: usize,
    n_max: usize,
    cfg: &SweepConfig,
) -> Result<BlockBoundReport> {
    if k == 0 || n_max < 2 * k {
        return Err(Error::InvalidArgument(
            "block inequality needs k ≥ 1 and n_max ≥ 2k".into(),
        ));
    }
    let la = pot.lookahead();
    let mut c1 = 0.0f64;
    for j in 1..=2 * k {
        sweep(sys, j + la, cfg, |w| c1 = c1.max(pot.evaluate(w, j).abs()))?;
    }
    let c = 4.0 * c1;
    let depth = n_max + k - 1 + la;
    let mode = pot.mode();
    let mut worst = f64::NEG_INFINITY;
    let (tested, _) = sweep(sys, depth, cfg, |w| {
        let prefix = prefix_values(pot, w, n_max);
        let mut block_sum = 0.0;
        for n in 1..=n_max {
            block_sum += pot.evaluate(&w[n - 1..], k) / k as f64;
            let f = prefix[n];
            let v = match mode {
                Mode::Subadditive => f - block_sum - c,
                Mode::Supadditive => block_sum - f - c,
                Mode::Additive => (f - block_sum).abs() - c,
            };
            worst = worst.max(v);
        }
    })?;
    Ok(BlockBoundReport {
        k,
        c1,
        c,
        max_violation: worst,
        words_tested: tested,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_pair() -> Vec<SmallMatrix> {
        vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])]
    }

    fn generic_pair() -> Vec<SmallMatrix> {
        vec![
            SmallMatrix::from_rows(&[vec![1.3, 0.4], vec![-0.2, 0.9]]).unwrap(),
            SmallMatrix::from_rows(&[vec![0.6, -1.1], vec![0.7, 1.5]]).unwrap(),
        ]
    }

    #[test]
    fn constant_birkhoff() {
        let f = PotentialSequence::constant(2, 0.3).unwrap();
        assert!((f.evaluate(&[0, 1, 1, 0, 1], 5) - 1.5).abs() < 1e-12);
        assert_eq!(f.mode(), Mode::Additive);
    }

    #[test]
    fn diag_cocycle_values() {
        let n = PotentialSequence::cocycle_norm(vec![SmallMatrix::diag(&[2.0, 0.5])]).unwrap();
        let m = PotentialSequence::cocycle_min_norm(vec![SmallMatrix::diag(&[2.0, 0.5])]).unwrap();
        assert!((n.evaluate(&[0; 4], 4) - 16f64.ln()).abs() < 1e-12);
        assert!((m.evaluate(&[0; 4], 4) + 16f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn modes_hold_on_generic_pair() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let cfg = SweepConfig::default();
        let f = PotentialSequence::cocycle_norm(generic_pair()).unwrap();
        let g = PotentialSequence::cocycle_min_norm(generic_pair()).unwrap();
        let cf = check_mode(&f, &sys, 8, &cfg).unwrap();
        let cg = check_mode(&g, &sys, 8, &cfg).unwrap();
        assert!(cf.holds(Mode::Subadditive, 1e-9), "{cf:?}");
        assert!(cg.holds(Mode::Supadditive, 1e-9), "{cg:?}");
        let flipped = check_mode(&PotentialSequence::scaled(-1.0, &f), &sys, 8, &cfg).unwrap();
        assert!((flipped.defect + cf.defect).abs() < 1e-12);
    }

    #[test]
    fn additive_defect_is_zero() {
        let sys = SymbolicSystem::golden_mean(0.5).unwrap();
        let f = PotentialSequence::birkhoff(2, 2, vec![0.1, -0.7, 0.4, 9.0]).unwrap();
        let c = check_mode(&f, &sys, 8, &SweepConfig::default()).unwrap();
        assert!(c.defect.abs() < 1e-12);
    }

    #[test]
    fn block_bounds() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let cfg = SweepConfig::default();
        for pot in [
            PotentialSequence::cocycle_norm(diag_pair()).unwrap(),
            PotentialSequence::cocycle_min_norm(diag_pair()).unwrap(),
        ] {
            let r = block_inequality_constant(&pot, &sys, 2, 10, &cfg).unwrap();
            assert!(r.max_violation <= 1e-9, "{r:?}");
            assert!((r.c - 4.0 * r.c1).abs() < 1e-15);
        }
        let add = PotentialSequence::birkhoff(2, 1, vec![0.2, -0.5]).unwrap();
        let r = block_inequality_constant(&add, &sys, 1, 6, &cfg).unwrap();
        assert!(r.max_violation <= -r.c + 1e-12);
    }

    #[test]
    fn sup_weighting_sees_lookahead() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let f = PotentialSequence::birkhoff(2, 2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        // f_1 on [1] is φ(10) or φ(11)
        assert_eq!(f.cylinder_extremes(&sys, &[1], 1), (2.0, 3.0));
    }

    #[test]
    fn exchangeable_counts_match_words() {
        let f = PotentialSequence::cocycle_norm(diag_pair()).unwrap();
        assert!(f.is_exchangeable());
        let w = [0, 1, 1, 0, 0, 0, 1];
        assert!((f.evaluate_counts(&[4, 3]).unwrap() - f.evaluate(&w, 7)).abs() < 1e-12);
        assert!(!PotentialSequence::cocycle_norm(generic_pair())
            .unwrap()
            .is_exchangeable());
    }

    #[test]
    fn singular_matrices_rejected() {
        let s = SmallMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(PotentialSequence::cocycle_norm(vec![s]).is_err());
    }
}
