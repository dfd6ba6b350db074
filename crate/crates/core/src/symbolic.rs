//! One-sided subshifts of finite type with the metric `d(x, y) = θ^{min{i : x_i ≠ y_i}}`.

#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::strongly_connected;
use crate::{Error, Result, DEFAULT_WORD_CAP};

/// A finite admissible word, stored as symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    /// Parses an ASCII digit string such as `"0102"`.
    pub fn parse(s: &str) -> Option<Word> {
        s.bytes()
            .map(|b| b.is_ascii_digit().then(|| b - b'0'))
            .collect::<Option<Vec<u8>>>()
            .map(Word)
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word(s.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

/// An eventually periodic point `prefix · cycle^∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl Point {
    pub fn symbol(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `n` symbols.
    pub fn take(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.symbol(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicSystem {
    k: usize,
    adj: Vec<bool>,
    theta: f64,
    primitivity: Option<usize>,
}

impl SymbolicSystem {
    /// Builds the SFT with 0/1 transition matrix `transition` and metric base `theta`.
    ///
    /// Every symbol needs at least one successor; otherwise sequences through it
    /// would die out and the language would not be extendable.
    pub fn new(transition: &[Vec<u8>], theta: f64) -> Result<Self> {
        let k = transition.len();
        if k == 0 || k > 255 {
            return Err(Error::InvalidSystem(alloc::format!(
                "alphabet size {k} outside 1..=255"
            )));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidSystem(alloc::format!(
                "metric base {theta} not in (0, 1)"
            )));
        }
        let mut adj = vec![false; k * k];
        for (i, row) in transition.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidSystem(alloc::format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => adj[i * k + j] = true,
                    _ => {
                        return Err(Error::InvalidSystem(alloc::format!(
                            "entry ({i}, {j}) is {v}, expected 0 or 1"
                        )))
                    }
                }
            }
            if !row.contains(&1) {
                return Err(Error::InvalidSystem(alloc::format!(
                    "symbol {i} has no admissible successor"
                )));
            }
        }
        let primitivity = primitivity_exponent(&adj, k);
        Ok(Self {
            k,
            adj,
            theta,
            primitivity,
        })
    }

    pub fn full_shift(k: usize, theta: f64) -> Result<Self> {
        Self::new(&vec![vec![1; k]; k], theta)
    }

    /// The golden-mean shift: the block `11` is forbidden.
    pub fn golden_mean(theta: f64) -> Result<Self> {
        Self::new(&[vec![1, 1], vec![1, 0]], theta)
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_full_shift(&self) -> bool {
        self.adj.iter().all(|&a| a)
    }

    #[inline]
    pub fn allows(&self, a: u8, b: u8) -> bool {
        self.adj[a as usize * self.k + b as usize]
    }

    pub fn transition(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.adj[i * self.k + j] as u8).collect())
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        strongly_connected(&self.adj, self.k)
    }

    /// Smallest `g` with every entry of `A^g` positive, if the matrix is primitive.
    pub fn primitivity_exponent(&self) -> Option<usize> {
        self.primitivity
    }

    pub fn is_admissible(&self, w: &[u8]) -> bool {
        w.iter().all(|&s| (s as usize) < self.k) && w.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    pub fn check_word(&self, w: &[u8]) -> Result<()> {
        if self.is_admissible(w) {
            Ok(())
        } else {
            Err(Error::InadmissibleWord(Word(w.to_vec()).to_string_lossy()))
        }
    }

    /// Number of admissible words of length `n` (saturating).
    pub fn word_count(&self, n: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        let mut ends = vec![1u64; self.k];
        for _ in 1..n {
            let mut next = vec![0u64; self.k];
            for a in 0..self.k {
                for b in 0..self.k {
                    if self.adj[a * self.k + b] {
                        next[b] = next[b].saturating_add(ends[a]);
                    }
                }
            }
            ends = next;
        }
        ends.iter().fold(0u64, |s, &c| s.saturating_add(c))
    }

    /// Fails with `TooLarge` when depth `n` has more than `cap` cylinders.
    pub fn check_cap(&self, n: usize, cap: u64) -> Result<u64> {
        let count = self.word_count(n);
        if count == 0 {
            return Err(Error::EmptyLanguage { depth: n });
        }
        if count > cap {
            return Err(Error::TooLarge {
                depth: n,
                count,
                cap,
            });
        }
        Ok(count)
    }

    /// Visits every admissible word of length `n` in lexicographic order.
    pub fn for_each_word(&self, n: usize, cap: u64, mut f: impl FnMut(&[u8])) -> Result<()> {
        self.check_cap(n, cap)?;
        if n == 0 {
            f(&[]);
            return Ok(());
        }
        self.walk(n, (), |_, w| {
            if w.len() == n {
                f(w);
            }
            Some(())
        });
        Ok(())
    }

    /// Pre-order depth-first walk of the tree of admissible words up to length
    /// `depth`, children in increasing symbol order.
    ///
    /// `step(parent_state, word)` is called on entering `word` (which ends in
    /// the new symbol) and returns the node's state, or `None` to prune its
    /// subtree. No cap is checked here.
    pub fn walk<S: Clone>(
        &self,
        depth: usize,
        root: S,
        mut step: impl FnMut(&S, &[u8]) -> Option<S>,
    ) {
        if depth == 0 {
            return;
        }
        let mut word: Vec<u8> = Vec::with_capacity(depth);
        let mut states: Vec<S> = Vec::with_capacity(depth + 1);
        states.push(root);
        // next[d] = next symbol to try at position d
        let mut next: Vec<usize> = vec![0; depth + 1];
        loop {
            let d = word.len();
            let mut advanced = false;
            if d < depth {
                while next[d] < self.k {
                    let s = next[d] as u8;
                    next[d] += 1;
                    if d > 0 && !self.allows(word[d - 1], s) {
                        continue;
                    }
                    word.push(s);
                    if let Some(st) = step(&states[d], &word) {
                        states.push(st);
                        next[d + 1] = 0;
                        advanced = true;
                        break;
                    }
                    word.pop();
                }
            }
            if !advanced {
                if d == 0 {
                    return;
                }
                word.pop();
                states.pop();
            }
        }
    }

    /// All admissible words of length `n`, lexicographically increasing.
    pub fn enumerate_words(&self, n: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        self.for_each_word(n, DEFAULT_WORD_CAP, |w| out.push(Word(w.to_vec())))?;
        Ok(out)
    }

    /// `m(ε) = max(0, ⌈log ε / log θ⌉)`, the extra depth a Bowen ball adds.
    pub fn extra_depth(&self, epsilon: f64) -> Result<usize> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        if epsilon >= 1.0 {
            return Ok(0);
        }
        let r = epsilon.ln() / self.theta.ln();
        // Snap ratios that are integers up to rounding, e.g. ε = θ².
        let m = if (r - r.round()).abs() < 1e-9 {
            r.round()
        } else {
            r.ceil()
        };
        Ok(m.max(0.0) as usize)
    }

    /// Depth `D = n + m(ε)` of the cylinder equal to `B_n(x, ε)`.
    pub fn bowen_ball_depth(&self, n: usize, epsilon: f64) -> Result<usize> {
        Ok(n + self.extra_depth(epsilon)?)
    }

    /// Lexicographically least successor of `a`.
    fn least_successor(&self, a: u8) -> Option<u8> {
        (0..self.k as u8).find(|&b| self.allows(a, b))
    }

    /// Deterministic representative of the cylinder `[word]`: the periodic
    /// extension when admissible, else the greedy least-successor continuation.
    pub fn canonical_point(&self, word: &[u8]) -> Result<Point> {
        self.check_word(word)?;
        if word.is_empty() {
            return self.canonical_point(&[0]);
        }
        let last = *word.last().unwrap();
        if self.allows(last, word[0]) {
            return Ok(Point {
                prefix: Vec::new(),
                cycle: word.to_vec(),
            });
        }
        // Greedy tail t_1, t_2, … is a deterministic function of the previous
        // symbol, so it cycles within k steps.
        let mut tail: Vec<u8> = Vec::new();
        let mut cur = last;
        let mut seen = vec![usize::MAX; self.k];
        loop {
            let nxt = self
                .least_successor(cur)
                .ok_or(Error::DeadEnd { symbol: cur })?;
            if seen[nxt as usize] != usize::MAX {
                let start = seen[nxt as usize];
                let mut prefix = word.to_vec();
                prefix.extend_from_slice(&tail[..start]);
                return Ok(Point {
                    prefix,
                    cycle: tail[start..].to_vec(),
                });
            }
            seen[nxt as usize] = tail.len();
            tail.push(nxt);
            cur = nxt;
        }
    }

    /// One canonical point per depth-`D` cylinder, `D = bowen_ball_depth(n, ε)`.
    pub fn maximal_separated_set(&self, n: usize, epsilon: f64) -> Result<Vec<Point>> {
        let depth = self.bowen_ball_depth(n, epsilon)?;
        let mut out = Vec::new();
        let mut err = None;
        self.for_each_word(depth, DEFAULT_WORD_CAP, |w| match self.canonical_point(w) {
            Ok(p) => out.push(p),
            Err(e) => err = Some(e),
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Random admissible word; each symbol is uniform among the allowed successors.
    pub(crate) fn random_word(&self, n: usize, rng: &mut crate::rng::Stream) -> Vec<u8> {
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let choices: Vec<u8> = (0..self.k as u8)
                .filter(|&b| i == 0 || self.allows(w[i - 1], b))
                .collect();
            let j = (rng.uniform() * choices.len() as f64) as usize;
            w.push(choices[j.min(choices.len() - 1)]);
        }
        w
    }
}

impl Word {
    fn to_string_lossy(&self) -> alloc::string::String {
        use alloc::string::ToString;
        self.to_string()
    }
}

fn primitivity_exponent(adj: &[bool], k: usize) -> Option<usize> {
    let mut pow = adj.to_vec();
    // Wielandt bound
    let bound = (k - 1) * (k - 1) + 1;
    for g in 1..=bound {
        if pow.iter().all(|&p| p) {
            return Some(g);
        }
        let mut next = vec![false; k * k];
        for i in 0..k {
            for l in 0..k {
                if pow[i * k + l] {
                    for j in 0..k {
                        if adj[l * k + j] {
                            next[i * k + j] = true;
                        }
                    }
                }
            }
        }
        pow = next;
    }
    None
}
