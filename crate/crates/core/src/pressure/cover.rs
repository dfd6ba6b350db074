use alloc::vec;
use alloc::vec::Vec;

use super::{cylinder_weight, tail_stats, validate_range, BallWeighting, PerN, PressureEstimate, PressureKind};
use crate::interval::Interval;
use crate::numeric::LogSumExp;
use crate::potentials::PotentialSequence;
use crate::symbolic::{SymbolicSystem, Word};
use crate::{Error, Result};

/// The set `Z`: the whole space or a finite union of cylinders.
#[derive(Debug, Clone, PartialEq)]
pub enum ZSet {
    Full,
    Words(Vec<Word>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverProblem {
    pub z: ZSet,
    /// Smallest admissible orbit length `N` of a cover element.
    pub n_min: usize,
    /// Deepest cylinder a cover may use.
    pub depth_cap: usize,
}

const INSIDE: usize = usize::MAX;

/// Prefix trie of the words of `Z`; a terminal node means everything below is in `Z`.
#[derive(Debug, Clone)]
struct ZTrie {
    k: usize,
    children: Vec<usize>,
    terminal: Vec<bool>,
}

impl ZTrie {
    fn new(z: &ZSet, sys: &SymbolicSystem) -> Result<Self> {
        let k = sys.alphabet_size();
        let mut t = ZTrie {
            k,
            children: vec![INSIDE; k],
            terminal: vec![false],
        };
        match z {
            ZSet::Full => t.terminal[0] = true,
            ZSet::Words(ws) => {
                if ws.is_empty() {
                    return Err(Error::InvalidArgument("Z must contain at least one word".into()));
                }
                for w in ws {
                    sys.check_word(w.symbols())?;
                    t.insert(w.symbols());
                }
            }
        }
        Ok(t)
    }

    fn insert(&mut self, w: &[u8]) {
        let mut node = 0;
        for &s in w {
            if self.terminal[node] {
                return;
            }
            let slot = node * self.k + s as usize;
            if self.children[slot] == INSIDE {
                self.children[slot] = self.terminal.len();
                self.terminal.push(false);
                self.children.extend(core::iter::repeat_n(INSIDE, self.k));
            }
            node = self.children[slot];
        }
        self.terminal[node] = true;
    }

    /// Root state: `INSIDE` when `Z` is everything.
    fn root(&self) -> usize {
        if self.terminal[0] {
            INSIDE
        } else {
            0
        }
    }

    /// State after appending `s`, or `None` when the cylinder misses `Z`.
    fn step(&self, state: usize, s: u8) -> Option<usize> {
        if state == INSIDE {
            return Some(INSIDE);
        }
        let c = self.children[state * self.k + s as usize];
        if c == INSIDE {
            None
        } else if self.terminal[c] {
            Some(INSIDE)
        } else {
            Some(c)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: usize,
    depth: usize,
    weight: f64,
    /// For nodes at the cap: `log Σ exp(weight)` over children meeting `Z`.
    child_weights: f64,
}

/// The tree of cylinders meeting `Z` down to `depth_cap`, with the ball
/// weights `w_{d-m}` of every node. Independent of `s` and `N`.
#[derive(Debug, Clone)]
pub struct CoverTree {
    nodes: Vec<Node>,
    m: usize,
    depth_cap: usize,
}

impl CoverTree {
    pub fn build(
        problem: &CoverProblem,
        sys: &SymbolicSystem,
        pot: &PotentialSequence,
        m: usize,
        weighting: BallWeighting,
        cap: u64,
    ) -> Result<Self> {
        let trie = ZTrie::new(&problem.z, sys)?;
        if problem.depth_cap < m + 1 {
            return Err(Error::DepthCapTooSmall {
                depth_cap: problem.depth_cap,
                required: m + 1,
            });
        }
        sys.check_cap(problem.depth_cap + 1, cap)?;
        let mut b = Builder {
            sys,
            pot,
            trie: &trie,
            m,
            weighting,
            cap_depth: problem.depth_cap,
            nodes: Vec::new(),
            word: Vec::new(),
            err: None,
        };
        b.nodes.push(Node {
            parent: usize::MAX,
            depth: 0,
            weight: f64::NAN,
            child_weights: f64::NAN,
        });
        b.descend(0, trie.root());
        if let Some(e) = b.err {
            return Err(e);
        }
        let nodes = b.nodes;
        Ok(CoverTree {
            nodes,
            m,
            depth_cap: problem.depth_cap,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `log M(Z, F, s, N, ε)` over cylinder-aligned covers with depths in
    /// `[N + m, depth_cap]`, and whether no cap node could be improved by one
    /// more level of refinement.
    pub fn log_m(&self, s: f64, n: usize) -> Result<(f64, bool)> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        if self.depth_cap < n + self.m {
            return Err(Error::DepthCapTooSmall {
                depth_cap: self.depth_cap,
                required: n + self.m,
            });
        }
        let mut sums = vec![LogSumExp::new(); self.nodes.len()];
        let mut certified = true;
        let mut root = f64::NAN;
        for i in (0..self.nodes.len()).rev() {
            let node = self.nodes[i];
            let cost = if node.depth == 0 {
                sums[i].value()
            } else {
                let own = -s * (node.depth - self.m) as f64 + node.weight;
                if node.depth == self.depth_cap {
                    let tol = 1e-12 * (1.0 + node.weight.abs() + s.abs());
                    if node.weight + s > node.child_weights + tol {
                        certified = false;
                    }
                    own
                } else if node.depth >= n + self.m {
                    own.min(sums[i].value())
                } else {
                    sums[i].value()
                }
            };
            if node.depth == 0 {
                root = cost;
            } else {
                let p = node.parent;
                sums[p].add(cost);
            }
        }
        Ok((root, certified))
    }
}

struct Builder<'a> {
    sys: &'a SymbolicSystem,
    pot: &'a PotentialSequence,
    trie: &'a ZTrie,
    m: usize,
    weighting: BallWeighting,
    cap_depth: usize,
    nodes: Vec<Node>,
    word: Vec<u8>,
    err: Option<Error>,
}

impl Builder<'_> {
    fn weight(&mut self) -> f64 {
        let d = self.word.len();
        if d <= self.m {
            return f64::NAN;
        }
        match cylinder_weight(self.pot, self.sys, &self.word, d - self.m, self.weighting) {
            Ok(w) => w,
            Err(e) => {
                self.err = Some(e);
                f64::NAN
            }
        }
    }

    fn successors(&self, state: usize) -> Vec<(u8, usize)> {
        (0..self.sys.alphabet_size() as u8)
            .filter(|&s| self.word.last().is_none_or(|&l| self.sys.allows(l, s)))
            .filter_map(|s| self.trie.step(state, s).map(|st| (s, st)))
            .collect()
    }

    fn descend(&mut self, idx: usize, state: usize) {
        let depth = self.word.len();
        let next = self.successors(state);
        if depth == self.cap_depth {
            let mut acc = LogSumExp::new();
            for (s, _) in next {
                self.word.push(s);
                let w = self.weight();
                acc.add(w);
                self.word.pop();
            }
            self.nodes[idx].child_weights = acc.value();
            return;
        }
        for (s, st) in next {
            self.word.push(s);
            let weight = self.weight();
            let child = self.nodes.len();
            self.nodes.push(Node {
                parent: idx,
                depth: depth + 1,
                weight,
                child_weights: f64::NAN,
            });
            self.descend(child, st);
            self.word.pop();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MEntry {
    pub n: usize,
    pub s: f64,
    pub log_m: f64,
    /// The value is the exact infimum over all cylinder-aligned covers,
    /// not just an upper bound from the depth cap.
    pub certified: bool,
}

/// `M(Z, F, s, N, ε)` for `N = problem.n_min`, in log scale.
pub fn caratheodory_m(
    problem: &CoverProblem,
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    m: usize,
    weighting: BallWeighting,
    s: f64,
    cap: u64,
) -> Result<MEntry> {
    if problem.depth_cap < problem.n_min + m {
        return Err(Error::DepthCapTooSmall {
            depth_cap: problem.depth_cap,
            required: problem.n_min + m,
        });
    }
    let tree = CoverTree::build(problem, sys, pot, m, weighting, cap)?;
    let (log_m, certified) = tree.log_m(s, problem.n_min)?;
    Ok(MEntry {
        n: problem.n_min,
        s,
        log_m,
        certified,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaratheodoryResult {
    /// `M` at the bracket ends and at `s_lo - margin`, `s_hi + margin`, for every `N`.
    pub m_values: Vec<MEntry>,
    pub root_bracket: Interval,
    /// Below the root, `M` grows with `N` across the grid.
    pub drift_below_increasing: bool,
    /// Above the root, `M` does not grow with `N` across the grid.
    pub drift_above_flat: bool,
    pub margin: f64,
}

/// Critical exponent of `s ↦ M(Z, F, s, N_max, ε)`: bisection on `log M = 0`.
#[allow(clippy::too_many_arguments)]
pub fn caratheodory_pressure(
    problem: &CoverProblem,
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    m: usize,
    weighting: BallWeighting,
    n_grid: &[usize],
    s_tol: f64,
    cap: u64,
) -> Result<CaratheodoryResult> {
    validate_range(n_grid)?;
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("N grid must be increasing".into()));
    }
    if !(s_tol > 0.0) {
        return Err(Error::InvalidArgument("s_tol must be positive".into()));
    }
    let tree = CoverTree::build(problem, sys, pot, m, weighting, cap)?;
    let n_max = *n_grid.last().unwrap();
    let f = |s: f64| tree.log_m(s, n_max).map(|r| r.0);

    let guess = f(0.0)? / n_max as f64;
    let (mut lo, mut hi) = (guess - 1.0, guess + 1.0);
    let mut width = 1.0;
    let mut tries = 0;
    while f(lo)? <= 0.0 {
        lo -= width;
        width *= 2.0;
        tries += 1;
        if tries > 60 || !lo.is_finite() {
            return Err(Error::BracketNotFound(alloc::format!(
                "log M stays ≤ 0 down to s = {lo}"
            )));
        }
    }
    width = 1.0;
    tries = 0;
    while f(hi)? >= 0.0 {
        hi += width;
        width *= 2.0;
        tries += 1;
        if tries > 60 || !hi.is_finite() {
            return Err(Error::BracketNotFound(alloc::format!(
                "log M stays ≥ 0 up to s = {hi}"
            )));
        }
    }
    while hi - lo > s_tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let margin = 0.1;
    let mut m_values = Vec::new();
    let mut below = Vec::new();
    let mut above = Vec::new();
    for &n in n_grid {
        for s in [lo - margin, lo, hi, hi + margin] {
            let (log_m, certified) = tree.log_m(s, n)?;
            m_values.push(MEntry {
                n,
                s,
                log_m,
                certified,
            });
            if s == lo - margin {
                below.push(log_m);
            } else if s == hi + margin {
                above.push(log_m);
            }
        }
    }
    let tol = 1e-9;
    let drift_below_increasing =
        below.len() < 2 || below.windows(2).all(|w| w[1] > w[0] - tol) && below.last() > below.first();
    let drift_above_flat = above.windows(2).all(|w| w[1] <= w[0] + 1e-6 * (1.0 + w[0].abs()));
    Ok(CaratheodoryResult {
        m_values,
        root_bracket: Interval::new(lo, hi),
        drift_below_increasing,
        drift_above_flat,
        margin,
    })
}

/// `log Λ(Z, F, N, ε)`: the minimal uniform-depth cover is every
/// depth-`(N + m)` cylinder meeting `Z`.
pub fn log_lambda(
    trie_z: &ZSet,
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    n: usize,
    m: usize,
    weighting: BallWeighting,
    cap: u64,
) -> Result<f64> {
    let trie = ZTrie::new(trie_z, sys)?;
    let depth = n + m;
    sys.check_cap(depth, cap)?;
    let mut acc = LogSumExp::new();
    let mut err = None;
    sys.walk(depth, trie.root(), |&st, w| {
        let next = trie.step(st, *w.last().unwrap())?;
        if w.len() == depth {
            match cylinder_weight(pot, sys, w, n, weighting) {
                Ok(v) => acc.add(v),
                Err(e) => err = Some(e),
            }
        }
        Some(next)
    });
    match err {
        Some(e) => Err(e),
        None => Ok(acc.value()),
    }
}

/// Lower and upper capacity pressure: liminf / limsup tails of `(1/N) log Λ`.
#[allow(clippy::too_many_arguments)]
pub fn capacity_pressure(
    problem: &CoverProblem,
    sys: &SymbolicSystem,
    pot: &PotentialSequence,
    m: usize,
    weighting: BallWeighting,
    n_range: &[usize],
    cap: u64,
) -> Result<(PressureEstimate, PressureEstimate)> {
    validate_range(n_range)?;
    let mut per_n = Vec::with_capacity(n_range.len());
    for &n in n_range {
        let v = log_lambda(&problem.z, sys, pot, n, m, weighting, cap)? / n as f64;
        per_n.push(PerN {
            n,
            value: v,
            lower: v,
            upper: v,
        });
    }
    let (limsup, liminf) = tail_stats(&per_n);
    let make = |kind, value| PressureEstimate {
        kind,
        mode: pot.mode(),
        weighting,
        m,
        delta: None,
        per_n: per_n.clone(),
        value,
        lower: liminf,
        upper: limsup,
        certified: false,
        limsup_tail: limsup,
        liminf_tail: liminf,
    };
    Ok((
        make(PressureKind::CapacityLower, liminf),
        make(PressureKind::CapacityUpper, limsup),
    ))
}
