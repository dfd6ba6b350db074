//! The acceptance criteria, each a self-contained check at pinned tolerances.

use pressurekit_core::dimension::{
    bowen_root, box_dimension_estimate, dimension_of_measure, lyapunov_pair, BowenParams, CookieCutter,
    LyapunovSource,
};
use pressurekit_core::linalg::SmallMatrix;
use pressurekit_core::measures::{
    brin_katok_estimate, exact_expectations, katok_entropy_estimate, kingman_limit,
};
use pressurekit_core::potentials::{block_inequality_constant, SweepConfig};
use pressurekit_core::pressure::{
    capacity_pressure, caratheodory_m, caratheodory_pressure, generic_set_pressure, measure_pressure,
    topological_pressure, transfer_pressure_exact, CoverProblem, GenericParams, ZSet,
};
use pressurekit_core::rng::Stream;
use pressurekit_core::{
    BallWeighting, Error, KingmanParams, MarkovMeasure, PotentialSequence, Result, SymbolicSystem, Word,
    DEFAULT_WORD_CAP,
};

use crate::check::{guarded, Check};

const CAP: u64 = DEFAULT_WORD_CAP;
const SEED: u64 = 2025;

pub type Criterion = (&'static str, fn() -> Result<Check>);

pub fn criteria() -> Vec<Criterion> {
    vec![
        ("01_zero_potential_pressure", zero_potential),
        ("02_transfer_oracle_equivalence", transfer_oracle),
        ("03_variational_additive", variational_additive),
        ("04_variational_subadditive_cocycle", variational_subadditive),
        ("05_variational_supadditive_min_norm", variational_supadditive),
        ("06_pressure_ordering", ordering),
        ("07_block_inequality", block_inequality),
        ("08_kingman_structure", kingman_structure),
        ("09_entropy_estimators", entropy_estimators),
        ("10_bowen_equation_pipeline", bowen_pipeline),
        ("11_generic_set_pressure", generic_set),
        ("12_average_conformal_discrimination", average_conformal),
    ]
}

pub fn run_all() -> Vec<Check> {
    criteria().into_iter().map(|(name, f)| guarded(name, f)).collect()
}

fn ln2() -> f64 {
    2f64.ln()
}

fn full2() -> SymbolicSystem {
    SymbolicSystem::full_shift(2, 0.5).expect("full shift")
}

fn golden() -> SymbolicSystem {
    SymbolicSystem::golden_mean(0.5).expect("golden mean")
}

fn bernoulli(p: f64) -> MarkovMeasure {
    MarkovMeasure::bernoulli(&[p, 1.0 - p]).expect("bernoulli")
}

fn diag_pair() -> Vec<SmallMatrix> {
    vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])]
}

/// Potential table with entries uniform in `(-1, 1)` from stream `stream` of the fixed seed.
fn random_table(len: usize, stream: u64) -> Vec<f64> {
    let mut rng = Stream::new(SEED, stream);
    (0..len).map(|_| 2.0 * rng.uniform() - 1.0).collect()
}

fn zero_potential() -> Result<Check> {
    let est = topological_pressure(
        &full2(),
        &PotentialSequence::zero(2)?,
        0,
        &(1..=16).collect::<Vec<_>>(),
        BallWeighting::Sup,
        CAP,
    )?;
    let worst = est.per_n.iter().map(|p| (p.value - ln2()).abs()).fold(0.0, f64::max);
    Ok(Check::within("", worst, 1e-9, "max over n = 1..16 of |P_n - log 2|"))
}

fn transfer_oracle() -> Result<Check> {
    let mut parts = Vec::new();
    for (label, sys, n_max) in [("full", full2(), 20), ("golden", golden(), 26)] {
        for i in 0..5u64 {
            let l = 1 + (i as usize % 2);
            let pot = PotentialSequence::birkhoff(2, l, random_table(1 << l, 100 + i))?;
            let exact = transfer_pressure_exact(&sys, &pot)?;
            let range: Vec<usize> = (1..=n_max).collect();
            let est = topological_pressure(&sys, &pot, 0, &range, BallWeighting::Sup, CAP)?;
            let name = format!("{label}#{i}(L={l})");
            parts.push(Check::within(format!("{name} tail"), (est.value - exact).abs(), 0.02, ""));
            parts.push(Check::within(
                format!("{name} bracket"),
                (est.lower - exact).max(exact - est.upper).max(0.0),
                1e-9,
                "",
            ));
        }
    }
    Ok(Check::all("", parts))
}

fn variational_additive() -> Result<Check> {
    let sys = full2();
    let mu = bernoulli(0.7);
    let pot = PotentialSequence::birkhoff(2, 1, random_table(2, 1))?;
    let target = mu.entropy_exact() + mu.integrate_birkhoff(&sys, &pot)?;
    let mut values = Vec::new();
    let mut parts = Vec::new();
    for delta in [0.1, 0.3, 0.5] {
        let est = measure_pressure(&sys, &pot, &mu, 0, delta, &[16], BallWeighting::Sup, CAP)?;
        parts.push(Check::within(format!("delta={delta}"), (est.value - target).abs(), 0.05, ""));
        values.push(est.value);
    }
    let spread = values.iter().copied().fold(f64::MIN, f64::max) - values.iter().copied().fold(f64::MAX, f64::min);
    parts.push(Check::within("delta spread", spread, 0.02, ""));
    Ok(Check::all("", parts))
}

fn variational_subadditive() -> Result<Check> {
    let sys = full2();
    let pot = PotentialSequence::cocycle_norm(diag_pair())?;
    let range = [250, 500, 1000, 2000];
    let mut parts = Vec::new();
    for (p, target) in [(0.7, 0.888123), (0.5, ln2())] {
        let mu = bernoulli(p);
        let est = measure_pressure(&sys, &pot, &mu, 0, 0.1, &range, BallWeighting::Sup, CAP)?;
        parts.push(Check::within(format!("p={p}"), (est.value - target).abs(), 0.05, ""));
    }
    // at p = 1/2 every finite-n bound is positive while the limit is 0
    let k = kingman_limit(&pot, &bernoulli(0.5), &sys, &KingmanParams::default())?;
    let least_bound = k.upper_bounds.iter().map(|u| u.1).fold(f64::INFINITY, f64::min);
    parts.push(Check::within("finite-n bounds stay positive", if least_bound > 0.05 { 0.0 } else { 1.0 }, 0.0, ""));
    parts.push(Check::within("Kingman value near 0", k.value.abs(), 0.05, ""));
    Ok(Check::all("", parts))
}

fn variational_supadditive() -> Result<Check> {
    let sys = full2();
    let pot = PotentialSequence::cocycle_min_norm(diag_pair())?;
    let range: Vec<usize> = (400..=2000).step_by(400).collect();
    let est = measure_pressure(&sys, &pot, &bernoulli(0.7), 0, 0.1, &range, BallWeighting::Center, CAP)?;
    let target = 0.610864 - 0.277259;
    Ok(Check::all(
        "",
        vec![
            Check::within("value", (est.value - target).abs(), 0.05, ""),
            Check::within("limsup vs liminf tail", est.limsup_tail - est.liminf_tail, 0.02, ""),
        ],
    ))
}

fn words(ws: &[&str]) -> ZSet {
    ZSet::Words(ws.iter().map(|w| Word::parse(w).expect("digit word")).collect())
}

/// Ten `(Z, F)` pairs: nested cylinder unions against sub-, sup- and additive potentials.
pub fn ordering_instances() -> Result<Vec<(ZSet, PotentialSequence)>> {
    let norm = PotentialSequence::cocycle_norm(diag_pair())?;
    let min = PotentialSequence::cocycle_min_norm(diag_pair())?;
    let generic = PotentialSequence::cocycle_norm(vec![
        SmallMatrix::from_rows(&[vec![2.0, 1.0], vec![0.5, 1.0]])?,
        SmallMatrix::from_rows(&[vec![0.3, -1.2], vec![1.0, 0.8]])?,
    ])?;
    let additive = PotentialSequence::birkhoff(2, 1, random_table(2, 60))?;
    Ok(vec![
        (ZSet::Full, norm.clone()),
        (words(&["0"]), norm.clone()),
        (words(&["01", "110"]), norm),
        (ZSet::Full, min.clone()),
        (words(&["10"]), min.clone()),
        (words(&["00", "111"]), min),
        (ZSet::Full, generic.clone()),
        (words(&["011"]), generic),
        (words(&["1"]), additive.clone()),
        (words(&["0", "11"]), additive),
    ])
}

fn ordering() -> Result<Check> {
    let sys = full2();
    let n = 10;
    let mut parts = Vec::new();
    for (i, (z, pot)) in ordering_instances()?.into_iter().enumerate() {
        let problem = CoverProblem { z: z.clone(), n_min: n, depth_cap: n + 2 };
        let car = caratheodory_pressure(&problem, &sys, &pot, 0, BallWeighting::Sup, &[n], 1e-5, CAP)?;
        let range = [6, 8, n];
        let (lo, hi) = capacity_pressure(&problem, &sys, &pot, 0, BallWeighting::Sup, &range, CAP)?;
        // P_Z at N against CP at the same N: a uniform-depth cover is one admissible cover
        let cp_at_n = lo.per_n.last().map_or(f64::NAN, |p| p.value);
        let slack = car.root_bracket.width();
        parts.push(Check::within(format!("#{i} P_Z<=CP"), (car.root_bracket.lo - cp_at_n - slack).max(0.0), 1e-9, ""));
        parts.push(Check::within(
            format!("#{i} CP<=CP_upper"),
            (lo.value - hi.value - lo.width() - hi.width()).max(0.0),
            1e-9,
            "",
        ));
        // exact monotonicity in Z at fixed (s, N): compare with the full space and a subset
        if let ZSet::Words(ws) = &z {
            let sub = ZSet::Words(vec![Word(
                ws[0].symbols().iter().copied().chain([0u8]).collect(),
            )]);
            for s in [car.root_bracket.lo - 0.2, car.root_bracket.mid(), car.root_bracket.hi + 0.2] {
                let at = |z: ZSet| -> Result<f64> {
                    let p = CoverProblem { z, n_min: n, depth_cap: n + 2 };
                    Ok(caratheodory_m(&p, &sys, &pot, 0, BallWeighting::Sup, s, CAP)?.log_m)
                };
                let (a, b, c) = (at(sub.clone())?, at(z.clone())?, at(ZSet::Full)?);
                parts.push(Check::within(format!("#{i} M monotone in Z"), (a - b).max(b - c).max(0.0), 0.0, ""));
            }
        }
    }
    Ok(Check::all("", parts))
}

fn block_inequality() -> Result<Check> {
    let sys = full2();
    let mut pots = vec![
        ("norm", PotentialSequence::cocycle_norm(diag_pair())?),
        ("min_norm", PotentialSequence::cocycle_min_norm(diag_pair())?),
    ];
    for i in 0..3 {
        pots.push(("additive", PotentialSequence::birkhoff(2, 2, random_table(4, 70 + i))?));
    }
    let mut parts = Vec::new();
    for (name, pot) in &pots {
        for k in 1..=3 {
            let r = block_inequality_constant(pot, &sys, k, 12, &SweepConfig::default())?;
            parts.push(Check::within(format!("{name} k={k}"), r.max_violation.max(0.0), 1e-9, ""));
        }
    }
    Ok(Check::all("", parts))
}

fn kingman_structure() -> Result<Check> {
    let generic = vec![
        SmallMatrix::from_rows(&[vec![2.0, 1.0], vec![0.5, 1.0]])?,
        SmallMatrix::from_rows(&[vec![0.3, -1.2], vec![1.0, 0.8]])?,
    ];
    let instances = [
        ("diag p=0.7", PotentialSequence::cocycle_norm(diag_pair())?, full2(), bernoulli(0.7)),
        ("diag p=0.5", PotentialSequence::cocycle_norm(diag_pair())?, full2(), bernoulli(0.5)),
        ("generic p=0.7", PotentialSequence::cocycle_norm(generic)?, full2(), bernoulli(0.7)),
        (
            "additive golden",
            PotentialSequence::birkhoff(2, 2, random_table(4, 80))?,
            golden(),
            MarkovMeasure::new(&[vec![0.5, 0.5], vec![1.0, 0.0]])?,
        ),
    ];
    let mut parts = Vec::new();
    for (name, pot, sys, mu) in &instances {
        let e = exact_expectations(pot, mu, sys, 16, CAP)?;
        let mut worst = 0f64;
        let mut n = 1;
        while 2 * n <= e.len() {
            worst = worst.max(e[2 * n - 1] / (2 * n) as f64 - e[n - 1] / n as f64);
            n *= 2;
        }
        parts.push(Check::within(format!("{name} doubling"), worst.max(0.0), 1e-9, ""));
        let k = kingman_limit(pot, mu, sys, &KingmanParams::default())?;
        let excess = k
            .upper_bounds
            .iter()
            .map(|&(_, u)| k.mc_estimate - 3.0 * k.mc_stderr - u)
            .fold(f64::NEG_INFINITY, f64::max);
        parts.push(Check::within(format!("{name} MC below bounds"), excess.max(0.0), 0.0, ""));
    }
    Ok(Check::all("", parts))
}

fn entropy_estimators() -> Result<Check> {
    let sys = [full2(), golden()];
    let mus = [bernoulli(0.7), MarkovMeasure::new(&[vec![0.5, 0.5], vec![1.0, 0.0]])?];
    let mut parts = Vec::new();
    for (i, (sys, mu)) in sys.iter().zip(&mus).enumerate() {
        let h = mu.entropy_exact();
        let x = mu.sample_orbit(2000, SEED + i as u64);
        let grid: Vec<usize> = (1..=2000).collect();
        let bk = brin_katok_estimate(mu, &x, 0, &grid)?;
        let at_n = bk.per_n.last().map_or(f64::NAN, |p| p.1);
        parts.push(Check::within(format!("mu#{i} Brin-Katok n=2000"), (at_n - h).abs(), 0.05, ""));
        for delta in [0.1, 0.01] {
            let r = katok_entropy_estimate(mu, sys, 0, delta, 16)?;
            parts.push(Check::within(format!("mu#{i} Katok delta={delta} n=16"), (r.rate - h).abs(), 0.05, ""));
        }
    }
    Ok(Check::all("", parts))
}

fn bowen_pipeline() -> Result<Check> {
    let sys = full2();
    let params = BowenParams::default();
    let mut parts = Vec::new();

    let third = CookieCutter::middle_third();
    let f = third.derivative_potential(1)?;
    let s0 = ln2() / 3f64.ln();
    let root = bowen_root(&sys, &f, &params)?;
    parts.push(Check::within("middle-third root width", root.certified.width(), 1e-3, ""));
    parts.push(Check::within("middle-third root contains log2/log3", root.certified.distance(s0), 0.0, ""));
    let grid: Vec<f64> = (2..=9).map(|j| 3f64.powi(-j)).collect();
    let boxes = box_dimension_estimate(&third.realize(10)?, &grid)?;
    parts.push(Check::within("middle-third box slope", (boxes.fit - s0).abs(), 0.03, ""));
    let kp = KingmanParams::default();
    let half = bernoulli(0.5);
    let rep = lyapunov_pair(&sys, LyapunovSource::Derivative(&f), &half, &kp, 1e-9)?;
    let dim = dimension_of_measure(&half, &rep)?;
    parts.push(Check::within("middle-third h/lambda", (dim.mid() - root.certified.mid()).abs(), 1e-3, ""));

    let moran = CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)])?;
    let g = moran.derivative_potential(1)?;
    let root = bowen_root(&sys, &g, &params)?;
    let s0 = 0.694242;
    parts.push(Check::within("Moran root", (root.certified.mid() - s0).abs(), 1e-3, ""));
    let s = root.certified.mid();
    let (p, q) = (2f64.powf(-s), 4f64.powf(-s));
    let mu = MarkovMeasure::bernoulli(&[p / (p + q), q / (p + q)])?;
    let rep = lyapunov_pair(&sys, LyapunovSource::Derivative(&g), &mu, &kp, 1e-9)?;
    let dim = dimension_of_measure(&mu, &rep)?;
    parts.push(Check::within("Moran h/lambda at the maximizing measure", (dim.mid() - s0).abs(), 1e-3, ""));
    Ok(Check::all("", parts))
}

fn generic_set() -> Result<Check> {
    let sys = full2();
    let mu = bernoulli(0.7);
    let mut parts = Vec::new();
    for (name, pot) in [
        ("zero", PotentialSequence::zero(2)?),
        ("diag cocycle", PotentialSequence::cocycle_norm(diag_pair())?),
    ] {
        let mut residuals = Vec::new();
        for depth in 8..=12 {
            let params = GenericParams { depth, ..GenericParams::default() };
            let r = generic_set_pressure(&sys, &pot, &mu, &params)?;
            residuals.push(((r.estimate.value - r.target).abs(), r.estimate.width()));
        }
        let (last, _) = residuals[residuals.len() - 1];
        parts.push(Check::within(format!("{name} depth 12"), last, 0.1, ""));
        // monotone decrease, allowing each step the bracket width as noise
        let rise = residuals
            .windows(2)
            .map(|w| w[1].0 - w[0].0 - 0.5 * (w[0].1 + w[1].1))
            .fold(0.0, f64::max);
        parts.push(Check::within(format!("{name} residual decreasing 8..12"), rise, 0.0, ""));
    }
    Ok(Check::all("", parts))
}

fn average_conformal() -> Result<Check> {
    let sys = full2();
    let half = bernoulli(0.5);
    let kp = KingmanParams::default();
    let rot = [SmallMatrix::scaled_rotation(2.0, 0.3), SmallMatrix::scaled_rotation(3.0, 1.1)];
    let a = lyapunov_pair(&sys, LyapunovSource::Cocycle(&rot), &half, &kp, 1e-6)?;
    let d = lyapunov_pair(&sys, LyapunovSource::Cocycle(&diag_pair()), &half, &kp, 1e-6)?;
    let refused = matches!(dimension_of_measure(&half, &d), Err(Error::NotAverageConformal { .. }));
    Ok(Check::all(
        "",
        vec![
            Check::within("rotation-scaled defect", a.defect.abs(), 1e-6, ""),
            Check::within("diag defect >= 0.5", (0.5 - d.defect).max(0.0), 0.0, format!("defect {}", d.defect)),
            Check::within("diag refused", if refused { 0.0 } else { 1.0 }, 0.0, ""),
        ],
    ))
}
