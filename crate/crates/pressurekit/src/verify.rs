//! Invariant suites behind `pressurekit verify`.

use std::str::FromStr;
use std::time::{Duration, Instant};

use pressurekit_core::dimension::{
    bowen_root, dimension_of_measure, hausdorff_dimension_cookie_cutter, lyapunov_pair, BowenParams, CookieCutter,
    DimensionParams, LyapunovSource,
};
use pressurekit_core::linalg::SmallMatrix;
use pressurekit_core::measures::{brin_katok_estimate, exact_expectations, katok_entropy_estimate};
use pressurekit_core::potentials::{check_mode, SweepConfig};
use pressurekit_core::pressure::{
    capacity_pressure, caratheodory_m, measure_pressure, topological_pressure, transfer_pressure_exact,
    CoverProblem, ZSet,
};
use pressurekit_core::{
    BallWeighting, MarkovMeasure, PotentialSequence, Result, SymbolicSystem, Word, DEFAULT_WORD_CAP,
};
use rayon::prelude::*;

use crate::acceptance;
use crate::check::{guarded, Check};
use crate::error::Error;

const CAP: u64 = DEFAULT_WORD_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Pressure,
    Dimension,
    Acceptance,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "core" => Suite::Core,
            "pressure" => Suite::Pressure,
            "dimension" => Suite::Dimension,
            "acceptance" => Suite::Acceptance,
            "all" => Suite::All,
            _ => return Err(Error::config(format!("unknown suite '{s}' (core, pressure, dimension, acceptance, all)"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Done(Check),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub results: Vec<Outcome>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.results.iter().filter(|r| matches!(r, Outcome::Done(c) if !c.passed)).count()
    }

    pub fn skipped(&self) -> usize {
        self.results.iter().filter(|r| matches!(r, Outcome::Skipped(_))).count()
    }

    /// 0 all passed, 1 a check failed, 3 nothing failed but some were skipped.
    pub fn exit_code(&self) -> u8 {
        if self.failed() > 0 {
            1
        } else if self.skipped() > 0 {
            3
        } else {
            0
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            match r {
                Outcome::Done(c) => s.push_str(&format!("{c}\n")),
                Outcome::Skipped(name) => s.push_str(&format!("SKIP {name} (budget exhausted)\n")),
            }
        }
        s.push_str(&format!(
            "{} checks: {} passed, {} failed, {} skipped\n",
            self.results.len(),
            self.results.len() - self.failed() - self.skipped(),
            self.failed(),
            self.skipped()
        ));
        s
    }
}

type Entry = (&'static str, fn() -> Result<Check>);

pub fn checks(suite: Suite) -> Vec<Entry> {
    let core: Vec<Entry> = vec![
        ("core/word_counts", word_counts),
        ("core/canonical_points", canonical_points),
        ("core/mode_checks", mode_checks),
        ("core/negation_flips_mode", negation_flips_mode),
        ("core/singular_value_sandwich", sandwich),
        ("core/measure_sums", measure_sums),
        ("core/shift_invariance", shift_invariance),
        ("core/kingman_doubling", kingman_doubling),
        ("core/katok_monotone_in_delta", katok_monotone),
        ("core/brin_katok_uniform", brin_katok_uniform),
    ];
    let pressure: Vec<Entry> = vec![
        ("pressure/z_monotonicity", z_monotonicity),
        ("pressure/union_bound", union_bound),
        ("pressure/m_monotone_in_s", m_monotone_in_s),
        ("pressure/epsilon_stability", epsilon_stability),
        ("pressure/delta_independence", delta_independence),
        ("pressure/variational_direction", variational_direction),
    ];
    let dimension: Vec<Entry> = vec![
        ("dimension/conformal_identity", conformal_identity),
        ("dimension/bisection_certificate", bisection_certificate),
        ("dimension/moran_triangle_and_box", moran_triangle),
        ("dimension/measures_below_root", measures_below_root),
    ];
    match suite {
        Suite::Core => core,
        Suite::Pressure => pressure,
        Suite::Dimension => dimension,
        Suite::Acceptance => acceptance::criteria(),
        Suite::All => [core, pressure, dimension, acceptance::criteria()].concat(),
    }
}

/// Runs a suite on `threads` workers; checks not started before `budget` elapses are skipped.
/// Results keep suite order regardless of scheduling.
pub fn verify(suite: Suite, budget: Option<Duration>, threads: usize) -> Result<Report, Error> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    let results = pool.install(|| {
        checks(suite)
            .into_par_iter()
            .map(|(name, f)| {
                if budget.is_some_and(|b| start.elapsed() > b) {
                    return Outcome::Skipped(name.to_string());
                }
                Outcome::Done(guarded(name, f))
            })
            .collect()
    });
    Ok(Report { results })
}

fn systems() -> Vec<SymbolicSystem> {
    vec![
        SymbolicSystem::full_shift(2, 0.5).expect("full shift"),
        SymbolicSystem::golden_mean(0.5).expect("golden mean"),
        SymbolicSystem::full_shift(3, 1.0 / 3.0).expect("full shift"),
    ]
}

fn instances() -> Result<Vec<(SymbolicSystem, MarkovMeasure)>> {
    Ok(vec![
        (systems()[0].clone(), MarkovMeasure::bernoulli(&[0.7, 0.3])?),
        (systems()[1].clone(), MarkovMeasure::new(&[vec![0.5, 0.5], vec![1.0, 0.0]])?),
        (
            systems()[2].clone(),
            MarkovMeasure::new(&[vec![0.2, 0.3, 0.5], vec![0.6, 0.1, 0.3], vec![0.3, 0.3, 0.4]])?,
        ),
    ])
}

fn generic_pair() -> Result<Vec<SmallMatrix>> {
    Ok(vec![
        SmallMatrix::from_rows(&[vec![2.0, 1.0], vec![0.5, 1.0]])?,
        SmallMatrix::from_rows(&[vec![0.3, -1.2], vec![1.0, 0.8]])?,
    ])
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn word_counts() -> Result<Check> {
    let mut worst = 0f64;
    for sys in systems() {
        let a = sys.transition();
        let k = a.len();
        let mut v = vec![1u64; k];
        for n in 1..=12 {
            if n > 1 {
                v = (0..k).map(|i| (0..k).map(|j| a[i][j] as u64 * v[j]).sum()).collect();
            }
            let words = sys.enumerate_words(n)?;
            let sorted = words.windows(2).all(|p| p[0] < p[1]);
            worst = worst.max((words.len() as f64 - v.iter().sum::<u64>() as f64).abs() + flag(sorted));
        }
    }
    Ok(Check::within("", worst, 0.0, "count vs sum of A^(n-1), strictly increasing"))
}

fn canonical_points() -> Result<Check> {
    let mut bad = 0.0;
    for sys in systems() {
        for w in sys.enumerate_words(5)? {
            let a = sys.canonical_point(w.symbols())?.take(100);
            let b = sys.canonical_point(w.symbols())?.take(100);
            bad += flag(a == b && sys.is_admissible(&a) && a.starts_with(w.symbols()));
        }
    }
    Ok(Check::within("", bad, 0.0, "deterministic admissible extensions"))
}

fn mode_checks() -> Result<Check> {
    let sys = &systems()[0];
    let cfg = SweepConfig::default();
    let f = PotentialSequence::cocycle_norm(generic_pair()?)?;
    let g = PotentialSequence::cocycle_min_norm(generic_pair()?)?;
    let h = PotentialSequence::birkhoff(2, 2, vec![0.3, -1.1, 0.7, 2.0])?;
    Ok(Check::all(
        "",
        vec![
            Check::within("norm", check_mode(&f, sys, 8, &cfg)?.defect.max(0.0), 1e-9, ""),
            Check::within("min norm", (-check_mode(&g, sys, 8, &cfg)?.defect).max(0.0), 1e-9, ""),
            Check::within("additive", check_mode(&h, sys, 8, &cfg)?.defect.abs(), 1e-12, ""),
        ],
    ))
}

fn negation_flips_mode() -> Result<Check> {
    let sys = &systems()[0];
    let cfg = SweepConfig::default();
    let f = PotentialSequence::cocycle_norm(generic_pair()?)?;
    let a = check_mode(&f, sys, 7, &cfg)?.defect;
    let b = check_mode(&PotentialSequence::scaled(-1.0, &f), sys, 7, &cfg)?.defect;
    Ok(Check::within("", (a + b).abs(), 1e-12, ""))
}

fn sandwich() -> Result<Check> {
    let sys = &systems()[0];
    let f = PotentialSequence::cocycle_norm(generic_pair()?)?;
    let g = PotentialSequence::cocycle_min_norm(generic_pair()?)?;
    let mut worst = 0f64;
    for n in 1..=8 {
        for w in sys.enumerate_words(n)? {
            let w = w.symbols();
            let mut acc = f.accumulator();
            w.iter().for_each(|&s| acc.push(s));
            let det = acc.log_abs_det().unwrap_or(f64::NAN);
            let (fv, gv) = (f.evaluate(w, n), g.evaluate(w, n));
            worst = worst.max(fv + gv - det).max(det - 2.0 * fv);
        }
    }
    Ok(Check::within("", worst.max(0.0), 1e-9, "f + g <= log|det| <= 2f"))
}

fn measure_sums() -> Result<Check> {
    let mut worst = 0f64;
    for (sys, mu) in instances()? {
        let top = if sys.alphabet_size() == 2 { 12 } else { 9 };
        for n in 1..=top {
            let total: f64 = sys.enumerate_words(n)?.iter().map(|w| mu.cylinder_measure(w.symbols())).sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok(Check::within("", worst, 1e-10, ""))
}

fn shift_invariance() -> Result<Check> {
    let mut worst = 0f64;
    for (sys, mu) in instances()? {
        let top = if sys.alphabet_size() == 2 { 10 } else { 7 };
        for n in 1..=top {
            for w in sys.enumerate_words(n)? {
                let lhs: f64 = (0..sys.alphabet_size() as u8)
                    .map(|a| {
                        let aw: Vec<u8> = std::iter::once(a).chain(w.symbols().iter().copied()).collect();
                        mu.cylinder_measure(&aw)
                    })
                    .sum();
                worst = worst.max((lhs - mu.cylinder_measure(w.symbols())).abs());
            }
        }
    }
    Ok(Check::within("", worst, 1e-12, ""))
}

fn kingman_doubling() -> Result<Check> {
    let mut worst = 0f64;
    for (sys, mu) in instances()?.into_iter().take(2) {
        let pots = [
            PotentialSequence::cocycle_norm(generic_pair()?)?,
            PotentialSequence::cocycle_norm(vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])])?,
        ];
        for f in &pots {
            let e = exact_expectations(f, &mu, &sys, 16, CAP)?;
            let mut n = 1;
            while 2 * n <= e.len() {
                worst = worst.max(e[2 * n - 1] / (2 * n) as f64 - e[n - 1] / n as f64);
                n *= 2;
            }
        }
    }
    Ok(Check::within("", worst.max(0.0), 1e-9, "(1/2n)E f_2n - (1/n)E f_n"))
}

fn katok_monotone() -> Result<Check> {
    let mut worst = 0f64;
    for (sys, mu) in instances()?.into_iter().take(2) {
        let mut last = f64::INFINITY;
        for delta in [0.01, 0.05, 0.1, 0.3, 0.5] {
            let r = katok_entropy_estimate(&mu, &sys, 0, delta, 14)?.rate;
            worst = worst.max(r - last);
            last = r;
        }
    }
    Ok(Check::within("", worst.max(0.0), 0.0, "rate non-increasing in delta"))
}

fn brin_katok_uniform() -> Result<Check> {
    let mu = MarkovMeasure::bernoulli(&[0.5, 0.5])?;
    let x = mu.sample_orbit(1000, 3);
    let grid: Vec<usize> = (1..=1000).collect();
    let bk = brin_katok_estimate(&mu, &x, 0, &grid)?;
    let worst = bk.per_n.iter().map(|p| (p.1 - 2f64.ln()).abs()).fold(0.0, f64::max);
    Ok(Check::within("", worst, 1e-12, ""))
}

fn words(ws: &[&str]) -> ZSet {
    ZSet::Words(ws.iter().map(|w| Word::parse(w).expect("digit word")).collect())
}

fn log_m(z: ZSet, pot: &PotentialSequence, s: f64, n: usize) -> Result<f64> {
    let p = CoverProblem { z, n_min: n, depth_cap: n + 3 };
    Ok(caratheodory_m(&p, &systems()[0], pot, 0, BallWeighting::Sup, s, CAP)?.log_m)
}

fn z_monotonicity() -> Result<Check> {
    let mut worst = 0f64;
    for (_, pot) in acceptance::ordering_instances()? {
        for s in [0.0, 0.5, 1.0] {
            let a = log_m(words(&["010"]), &pot, s, 5)?;
            let b = log_m(words(&["01"]), &pot, s, 5)?;
            let c = log_m(words(&["01", "11"]), &pot, s, 5)?;
            let d = log_m(ZSet::Full, &pot, s, 5)?;
            worst = worst.max(a - b).max(b - c).max(c - d);
        }
        let cap = |z| -> Result<Vec<f64>> {
            let p = CoverProblem { z, n_min: 4, depth_cap: 10 };
            let (lo, _) = capacity_pressure(&p, &systems()[0], &pot, 0, BallWeighting::Sup, &[4, 6, 8], CAP)?;
            Ok(lo.per_n.iter().map(|p| p.value).collect())
        };
        let (small, big) = (cap(words(&["01"]))?, cap(words(&["0"]))?);
        worst = worst.max(small.iter().zip(&big).map(|(a, b)| a - b).fold(0.0, f64::max));
    }
    Ok(Check::within("", worst.max(0.0), 1e-12, "nested unions at fixed (s, N)"))
}

fn union_bound() -> Result<Check> {
    let mut worst = 0f64;
    for (_, pot) in acceptance::ordering_instances()? {
        for s in [0.0, 0.7] {
            let u = log_m(words(&["0", "11"]), &pot, s, 5)?;
            let a = log_m(words(&["0"]), &pot, s, 5)?;
            let b = log_m(words(&["11"]), &pot, s, 5)?;
            worst = worst.max(u.exp() - a.exp() - b.exp());
        }
    }
    Ok(Check::within("", worst.max(0.0), 1e-9, "M(Z1 u Z2) <= M(Z1) + M(Z2)"))
}

fn m_monotone_in_s() -> Result<Check> {
    let mut worst = 0f64;
    for (z, pot) in acceptance::ordering_instances()? {
        let mut last = f64::INFINITY;
        for i in 0..15 {
            let v = log_m(z.clone(), &pot, -0.5 + 0.2 * i as f64, 4)?;
            worst = worst.max(v - last);
            last = v;
        }
    }
    Ok(Check::within("", worst.max(0.0), 1e-12, ""))
}

fn epsilon_stability() -> Result<Check> {
    let sys = &systems()[1];
    let pot = PotentialSequence::birkhoff(2, 2, vec![0.1, -0.4, 0.9, 0.0])?;
    let range: Vec<usize> = (4..=18).collect();
    let exact = transfer_pressure_exact(sys, &pot)?;
    let ests = (0..=2)
        .map(|m| topological_pressure(sys, &pot, m, &range, BallWeighting::Sup, CAP))
        .collect::<Result<Vec<_>>>()?;
    let mut parts = Vec::new();
    for (m, pair) in ests.windows(2).enumerate() {
        let tol = 2.0 * (pair[0].width() + pair[1].width());
        parts.push(Check::within(format!("m={m} vs m={}", m + 1), (pair[0].value - pair[1].value).abs(), tol, ""));
    }
    for (m, e) in ests.iter().enumerate() {
        parts.push(Check::within(format!("m={m} brackets oracle"), (e.lower - exact).max(exact - e.upper).max(0.0), 1e-9, ""));
    }
    Ok(Check::all("", parts))
}

fn delta_independence() -> Result<Check> {
    let sys = &systems()[0];
    let mu = MarkovMeasure::bernoulli(&[0.7, 0.3])?;
    let pot = PotentialSequence::cocycle_norm(vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])])?;
    let range: Vec<usize> = (100..=400).step_by(100).collect();
    let ests = [0.1, 0.3, 0.5]
        .iter()
        .map(|&d| measure_pressure(sys, &pot, &mu, 0, d, &range, BallWeighting::Sup, CAP))
        .collect::<Result<Vec<_>>>()?;
    let widest = ests.iter().map(|e| e.per_n.last().map_or(0.0, |p| p.upper - p.lower)).fold(0.0, f64::max);
    let spread = ests.iter().map(|e| (e.value - ests[0].value).abs()).fold(0.0, f64::max);
    Ok(Check::within("", spread, (2.0 * widest).max(0.02), format!("bracket width {widest:.3e}")))
}

fn variational_direction() -> Result<Check> {
    let sys = &systems()[0];
    let mu = MarkovMeasure::bernoulli(&[0.7, 0.3])?;
    let pot = PotentialSequence::cocycle_norm(generic_pair()?)?;
    let top = topological_pressure(sys, &pot, 0, &(6..=16).collect::<Vec<_>>(), BallWeighting::Center, CAP)?;
    let meas = measure_pressure(sys, &pot, &mu, 0, 0.1, &[8, 12, 16], BallWeighting::Center, CAP)?;
    Ok(Check::within("", (meas.value - top.upper).max(0.0), 0.02, "measure pressure <= topological"))
}

fn conformal_identity() -> Result<Check> {
    let sys = &systems()[0];
    let mu = MarkovMeasure::bernoulli(&[0.6, 0.4])?;
    let mut worst = 0f64;
    for cc in [CookieCutter::middle_third(), CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)])?] {
        let f = cc.derivative_potential(2)?;
        let r = lyapunov_pair(sys, LyapunovSource::Derivative(&f), &mu, &Default::default(), 1e-12)?;
        worst = worst.max(r.defect.abs());
    }
    Ok(Check::within("", worst, 1e-15, ""))
}

fn bisection_certificate() -> Result<Check> {
    let sys = &systems()[0];
    let params = BowenParams::default();
    let mut worst = 0f64;
    for cc in [CookieCutter::middle_third(), CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)])?] {
        let f = cc.derivative_potential(1)?;
        let r = bowen_root(sys, &f, &params)?;
        let p = |s: f64| topological_pressure(sys, &PotentialSequence::scaled(-s, &f), 0, &params.n_range, BallWeighting::Sup, CAP);
        worst = worst.max(-p(r.certified.lo)?.lower).max(p(r.certified.hi)?.upper);
    }
    Ok(Check::within("", worst.max(0.0), 0.0, "P(-s_lo F) > 0 > P(-s_hi F)"))
}

fn moran_triangle() -> Result<Check> {
    let mut parts = Vec::new();
    for (name, cc) in [
        ("constant 1/3", CookieCutter::middle_third()),
        ("Moran 1/2,1/4", CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)])?),
        ("Moran 1/3,1/5,1/7", CookieCutter::affine(&[(1.0 / 3.0, 0.0), (0.2, 0.4), (1.0 / 7.0, 6.0 / 7.0)])?),
    ] {
        let r = hausdorff_dimension_cookie_cutter(&cc, &DimensionParams::default())?;
        parts.push(Check::within(format!("{name} triangle"), r.triangle_residual.unwrap_or(f64::INFINITY), 1e-3, ""));
        parts.push(Check::within(format!("{name} box"), (r.box_estimate.fit - r.s0.mid()).abs(), 0.03, ""));
    }
    Ok(Check::all("", parts))
}

fn measures_below_root() -> Result<Check> {
    let sys = &systems()[0];
    let cc = CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)])?;
    let f = cc.derivative_potential(1)?;
    let root = bowen_root(sys, &f, &BowenParams::default())?;
    let mut worst = f64::NEG_INFINITY;
    for p in [0.1, 0.3, 0.5, 0.62, 0.8, 0.95] {
        let mu = MarkovMeasure::bernoulli(&[p, 1.0 - p])?;
        let r = lyapunov_pair(sys, LyapunovSource::Derivative(&f), &mu, &Default::default(), 1e-9)?;
        worst = worst.max(dimension_of_measure(&mu, &r)?.lo - root.certified.hi);
    }
    Ok(Check::within("", worst.max(0.0), 1e-3, "h/lambda <= s0"))
}
