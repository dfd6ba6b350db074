//! Command dispatch: config in, CSV and summary out.

use std::fmt::Write as _;
use std::str::FromStr;

use pressurekit_core::dimension::{
    bowen_root, hausdorff_dimension_cookie_cutter, BowenParams, CookieCutter, DimensionParams,
};
use pressurekit_core::measures::{brin_katok_estimate, katok_entropy_estimate, kingman_limit};
use pressurekit_core::pressure::{
    capacity_pressure, caratheodory_pressure, generic_set_pressure, measure_pressure, topological_pressure,
    transfer_pressure_exact, CoverProblem, GenericParams, PerN, PressureEstimate, PressureKind,
};
use pressurekit_core::{
    BallWeighting, KingmanParams, MarkovMeasure, PotentialSequence, SymbolicSystem, DEFAULT_WORD_CAP,
};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::formats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Pressure,
    MeasurePressure,
    Caratheodory,
    Capacity,
    Kingman,
    Entropy,
    BowenRoot,
    Dimension,
    GenericSet,
    Verify,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Pressure,
        Command::MeasurePressure,
        Command::Caratheodory,
        Command::Capacity,
        Command::Kingman,
        Command::Entropy,
        Command::BowenRoot,
        Command::Dimension,
        Command::GenericSet,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Pressure => "pressure",
            Command::MeasurePressure => "measure-pressure",
            Command::Caratheodory => "caratheodory",
            Command::Capacity => "capacity",
            Command::Kingman => "kingman",
            Command::Entropy => "entropy",
            Command::BowenRoot => "bowen-root",
            Command::Dimension => "dimension",
            Command::GenericSet => "generic-set",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::config(format!("unknown command '{s}'")))
    }
}

/// What a command produced. `passed` is false when a check it performs failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: Vec<u8>,
    pub summary: String,
    pub passed: bool,
}

struct Inputs<'a> {
    cfg: &'a Config,
    cap: u64,
    m: usize,
    weighting: BallWeighting,
}

impl<'a> Inputs<'a> {
    fn new(cfg: &'a Config) -> Result<Self> {
        let cap = cfg.get_or("word_cap", DEFAULT_WORD_CAP)?;
        if cap > DEFAULT_WORD_CAP {
            return Err(Error::config(format!("word_cap {cap} exceeds the global budget {DEFAULT_WORD_CAP}")));
        }
        let weighting = match cfg.raw("weighting").unwrap_or("sup") {
            "sup" => BallWeighting::Sup,
            "center" => BallWeighting::Center,
            w => return Err(Error::config(format!("weighting must be 'sup' or 'center', got '{w}'"))),
        };
        Ok(Self {
            cfg,
            cap,
            m: cfg.get_or("m", 0)?,
            weighting,
        })
    }

    fn system(&self) -> Result<SymbolicSystem> {
        formats::parse_system(&self.cfg.file("system")?)
    }

    fn measure(&self, sys: &SymbolicSystem) -> Result<MarkovMeasure> {
        let mu = formats::parse_measure(&self.cfg.file("measure")?)?;
        mu.check_support(sys)?;
        Ok(mu)
    }

    fn potential(&self, sys: &SymbolicSystem) -> Result<PotentialSequence> {
        let p = formats::parse_potential(&self.cfg.file("potential")?)?;
        if p.alphabet_size() != sys.alphabet_size() {
            return Err(Error::config("potential and system alphabets differ"));
        }
        Ok(p)
    }

    fn cover(&self) -> Result<CoverProblem> {
        let mut p = formats::parse_cover(&self.cfg.file("cover")?)?;
        if let Some(d) = self.cfg.get("depth_cap")? {
            p.depth_cap = d;
        }
        Ok(p)
    }

    fn cutter(&self) -> Result<CookieCutter> {
        formats::parse_cutter(&self.cfg.file("cutter")?)
    }

    fn kingman(&self) -> Result<KingmanParams> {
        let d = KingmanParams::default();
        Ok(KingmanParams {
            n_exact: self.cfg.get_or("n_exact", d.n_exact)?,
            mc_orbits: self.cfg.get_or("mc_orbits", d.mc_orbits)?,
            mc_length: self.cfg.get_or("mc_length", d.mc_length)?,
            seed: self.cfg.get_or("seed", d.seed)?,
            cap: self.cap,
        })
    }

    /// Word-count budget, checked before any computation starts.
    fn budget(&self, sys: &SymbolicSystem, depth: usize) -> Result<()> {
        sys.check_cap(depth, self.cap)?;
        Ok(())
    }
}

fn csv_of(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn max_of(v: &[usize]) -> usize {
    v.iter().copied().max().unwrap_or(0)
}

/// Runs one non-`verify` command.
pub fn run(command: Command, cfg: &Config) -> Result<Outcome> {
    if let Some(c) = cfg.raw("command") {
        if c != command.name() {
            return Err(Error::config(format!("config is for '{c}', not '{}'", command.name())));
        }
    }
    let inp = Inputs::new(cfg)?;
    match command {
        Command::Pressure => pressure(&inp),
        Command::MeasurePressure => measure(&inp),
        Command::Caratheodory => caratheodory(&inp),
        Command::Capacity => capacity(&inp),
        Command::Kingman => kingman(&inp),
        Command::Entropy => entropy(&inp),
        Command::BowenRoot => bowen(&inp),
        Command::Dimension => dimension(&inp),
        Command::GenericSet => generic(&inp),
        Command::Verify => Err(Error::config("verify is run through the verify module")),
    }
}

fn describe(e: &PressureEstimate) -> String {
    format!(
        "{} ({}, {} weighting, m = {}): value {:.6}, bracket [{:.6}, {:.6}]{}\n",
        e.kind.name(),
        e.mode.name(),
        e.weighting.name(),
        e.m,
        e.value,
        e.lower,
        e.upper,
        if e.certified { ", certified" } else { "" }
    )
}

fn pressure(inp: &Inputs<'_>) -> Result<Outcome> {
    let sys = inp.system()?;
    let pot = inp.potential(&sys)?;
    let range = inp.cfg.list_or("n_range", (1..=12).collect())?;
    inp.budget(&sys, max_of(&range) + inp.m + pot.lookahead())?;
    let est = topological_pressure(&sys, &pot, inp.m, &range, inp.weighting, inp.cap)?;
    let mut summary = describe(&est);
    let mut passed = true;
    if let Ok(exact) = transfer_pressure_exact(&sys, &pot) {
        let inside = est.lower - 1e-9 <= exact && exact <= est.upper + 1e-9;
        passed &= inside;
        let _ = writeln!(
            summary,
            "transfer oracle: {exact:.9}, residual value - oracle = {:.3e}, bracket contains oracle: {}",
            est.value - exact,
            if inside { "yes" } else { "NO" }
        );
    }
    Ok(Outcome {
        csv: csv_of(|b| formats::write_pressure_csv(b, std::slice::from_ref(&est)))?,
        summary,
        passed,
    })
}

fn measure(inp: &Inputs<'_>) -> Result<Outcome> {
    let sys = inp.system()?;
    let mu = inp.measure(&sys)?;
    let pot = inp.potential(&sys)?;
    let range = inp.cfg.list_or("n_range", vec![4, 8, 12, 16])?;
    let delta: f64 = inp.cfg.get_or("delta", 0.1)?;
    let type_classes = inp.m == 0 && sys.is_full_shift() && mu.bernoulli_weights().is_some() && pot.is_exchangeable();
    if !type_classes {
        inp.budget(&sys, max_of(&range) + inp.m + pot.lookahead())?;
    }
    let est = measure_pressure(&sys, &pot, &mu, inp.m, delta, &range, inp.weighting, inp.cap)?;
    let h = mu.entropy_exact();
    let k = kingman_limit(&pot, &mu, &sys, &inp.kingman()?)?;
    let mut summary = describe(&est);
    let _ = writeln!(
        summary,
        "variational residual: value - (h + F_*) = {:.6} - ({h:.6} + {:.6}) = {:.3e}  (F_* bracket [{:.6}, {:.6}], spanning bracket width {:.3e})",
        est.value,
        k.value,
        est.value - (h + k.value),
        k.lower,
        k.upper,
        est.width()
    );
    Ok(Outcome {
        csv: csv_of(|b| formats::write_pressure_csv(b, std::slice::from_ref(&est)))?,
        summary,
        passed: true,
    })
}

fn caratheodory(inp: &Inputs<'_>) -> Result<Outcome> {
    let sys = inp.system()?;
    let pot = inp.potential(&sys)?;
    let problem = inp.cover()?;
    let grid = inp.cfg.list_or("n_grid", vec![problem.n_min])?;
    let s_tol: f64 = inp.cfg.get_or("s_tol", 1e-4)?;
    inp.budget(&sys, problem.depth_cap)?;
    let r = caratheodory_pressure(&problem, &sys, &pot, inp.m, inp.weighting, &grid, s_tol, inp.cap)?;
    // one row per N: the root of log M(·, N) = 0 at that N alone
    let mut per_n = Vec::with_capacity(grid.len());
    for &n in &grid {
        let one = caratheodory_pressure(&problem, &sys, &pot, inp.m, inp.weighting, &[n], s_tol, inp.cap)?;
        per_n.push(PerN {
            n,
            value: one.root_bracket.mid(),
            lower: one.root_bracket.lo,
            upper: one.root_bracket.hi,
        });
    }
    let certified = r.m_values.iter().all(|e| e.certified);
    let est = PressureEstimate {
        kind: PressureKind::Caratheodory,
        mode: pot.mode(),
        weighting: inp.weighting,
        m: inp.m,
        delta: None,
        value: r.root_bracket.mid(),
        lower: r.root_bracket.lo,
        upper: r.root_bracket.hi,
        certified,
        limsup_tail: r.root_bracket.hi,
        liminf_tail: r.root_bracket.lo,
        per_n,
    };
    let mut summary = describe(&est);
    let _ = writeln!(
        summary,
        "drift check: M increasing in N below the root: {}; depth-cap certificate: {}",
        r.drift_below_increasing, certified
    );
    // M can only grow with N, so growth just above the root means the root
    // is still moving with N rather than that anything is wrong
    let _ = writeln!(
        summary,
        "converged in N: {}{}",
        r.drift_above_flat,
        if r.drift_above_flat { "" } else { " (M still grows above the root; the value is a lower proxy)" }
    );
    Ok(Outcome {
        csv: csv_of(|b| formats::write_pressure_csv(b, std::slice::from_ref(&est)))?,
        summary,
        passed: r.drift_below_increasing,
    })
}

fn capacity(inp: &Inputs<'_>) -> Result<Outcome> {
    let sys = inp.system()?;
    let pot = inp.potential(&sys)?;
    let problem = inp.cover()?;
    let range = inp.cfg.list_or("n_range", (problem.n_min..=problem.depth_cap.saturating_sub(inp.m)).collect())?;
    inp.budget(&sys, max_of(&range) + inp.m + pot.lookahead())?;
    let (lo, hi) = capacity_pressure(&problem, &sys, &pot, inp.m, inp.weighting, &range, inp.cap)?;
    let ordered = lo.value <= hi.value + 1e-12;
    let mut summary = describe(&lo) + &describe(&hi);
    let _ = writeln!(summary, "ordering lower <= upper: {ordered}");
    Ok(Outcome {
        csv: csv_of(|b| formats::write_pressure_csv(b, &[lo, hi]))?,
        summary,
        passed: ordered,
    })
}

fn kingman(inp: &Inputs<'_>) -> Result<Outcome> {
    let sys = inp.system()?;
    let mu = inp.measure(&sys)?;
    let pot = inp.potential(&sys)?;
    let params = inp.kingman()?;
    inp.budget(&sys, params.n_exact + pot.lookahead())?;
    let b = kingman_limit(&pot, &mu, &sys, &params)?;
    let sign = if pot.mode().is_sub() { 1.0 } else { -1.0 };
    let mut doubling = true;
    let mut n = 1;
    while 2 * n <= b.upper_bounds.len() {
        doubling &= sign * (b.upper_bounds[2 * n - 1].1 - b.upper_bounds[n - 1].1) <= 1e-9;
        n *= 2;
    }
    let summary = format!(
        "Kingman limit ({}): value {:.6}, bracket [{:.6}, {:.6}]; Monte Carlo {:.6} ± {:.2e}; doubling monotonicity: {}\n",
        b.mode.name(),
        b.value,
        b.lower,
        b.upper,
        b.mc_estimate,
        b.mc_stderr,
        doubling
    );
    Ok(Outcome {
        csv: csv_of(|buf| formats::write_kingman_csv(buf, &b, params.mc_orbits, params.mc_length, params.seed))?,
        summary,
        passed: doubling,
    })
}

fn entropy(inp: &Inputs<'_>) -> Result<Outcome> {
    let sys = inp.system()?;
    let mu = inp.measure(&sys)?;
    let n: usize = inp.cfg.get_or("n", 16)?;
    let delta: f64 = inp.cfg.get_or("delta", 0.1)?;
    let orbit_len: usize = inp.cfg.get_or("orbit_len", 2000)?;
    let seed: u64 = inp.cfg.get_or("seed", 2025)?;
    inp.budget(&sys, n + inp.m)?;
    let exact = mu.entropy_exact();
    let katok = katok_entropy_estimate(&mu, &sys, inp.m, delta, n)?;
    let x = mu.sample_orbit(orbit_len + inp.m, seed);
    let grid = inp.cfg.list_or("n_grid", (1..=orbit_len).collect())?;
    if max_of(&grid) + inp.m > x.len() {
        return Err(Error::config("n_grid exceeds orbit_len"));
    }
    let bk = brin_katok_estimate(&mu, &x, inp.m, &grid)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["estimator", "n", "epsilon_m", "delta", "seed", "value", "exact"])?;
    for &(n, v) in &bk.per_n {
        w.write_record([
            "brin_katok".into(),
            n.to_string(),
            inp.m.to_string(),
            String::new(),
            seed.to_string(),
            v.to_string(),
            exact.to_string(),
        ])?;
    }
    w.write_record([
        "katok".into(),
        n.to_string(),
        inp.m.to_string(),
        delta.to_string(),
        String::new(),
        katok.rate.to_string(),
        exact.to_string(),
    ])?;
    let csv = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let summary = format!(
        "exact entropy {exact:.6}\nBrin-Katok tail mean {:.6} (residual {:.3e}){}\nKatok count {} at n = {n}, delta = {delta}: rate {:.6} (residual {:.3e})\n",
        bk.tail_mean,
        bk.tail_mean - exact,
        if bk.hit_null_ball { ", null ball encountered" } else { "" },
        katok.count,
        katok.rate,
        katok.rate - exact
    );
    Ok(Outcome {
        csv,
        summary,
        passed: !bk.hit_null_ball,
    })
}

fn bowen_params(inp: &Inputs<'_>) -> Result<BowenParams> {
    let d = BowenParams::default();
    Ok(BowenParams {
        n_range: inp.cfg.list_or("n_range", d.n_range)?,
        n_probe: inp.cfg.get_or("n_probe", d.n_probe)?,
        m: inp.m,
        weighting: inp.weighting,
        s_tol: inp.cfg.get_or("s_tol", d.s_tol)?,
        cap: inp.cap,
    })
}

fn interval_rows(rows: &[(&str, f64, f64, f64)], params: &str) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["quantity", "value", "lower", "upper", "params"])?;
    for (q, v, lo, hi) in rows {
        w.write_record([q.to_string(), v.to_string(), lo.to_string(), hi.to_string(), params.to_string()])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn bowen(inp: &Inputs<'_>) -> Result<Outcome> {
    let params = bowen_params(inp)?;
    let locality: usize = inp.cfg.get_or("locality", 1)?;
    let (sys, pot) = if inp.cfg.raw("cutter").is_some() {
        let cc = inp.cutter()?;
        (SymbolicSystem::full_shift(cc.branch_count(), 0.5)?, cc.derivative_potential(locality)?)
    } else {
        let sys = inp.system()?;
        let pot = inp.potential(&sys)?;
        (sys, pot)
    };
    inp.budget(&sys, max_of(&params.n_range).max(params.n_probe) + params.m + pot.lookahead())?;
    let r = bowen_root(&sys, &pot, &params)?;
    let summary = format!(
        "s0 bracket [{:.6}, {:.6}] (certified), estimate bracket [{:.6}, {:.6}], converged: {}, expansion rate {:.6}, P(0) = {:.6}\n",
        r.certified.lo, r.certified.hi, r.estimate.lo, r.estimate.hi, r.converged, r.growth, r.pressure_at_zero.value
    );
    let csv = interval_rows(
        &[
            ("bowen_root_certified", r.certified.mid(), r.certified.lo, r.certified.hi),
            ("bowen_root_estimate", r.estimate.mid(), r.estimate.lo, r.estimate.hi),
        ],
        &inp.cfg.fingerprint(),
    )?;
    Ok(Outcome {
        csv,
        summary,
        passed: r.converged,
    })
}

fn dimension(inp: &Inputs<'_>) -> Result<Outcome> {
    let cc = inp.cutter()?;
    let d = DimensionParams::default();
    let params = DimensionParams {
        locality: inp.cfg.get_or("locality", d.locality)?,
        bowen: bowen_params(inp)?,
        box_depth: inp.cfg.get_or("box_depth", d.box_depth)?,
        epsilon_grid: d.epsilon_grid,
        ledrappier_delta: inp.cfg.get_or("delta", d.ledrappier_delta)?,
        tolerance: inp.cfg.get_or("tolerance", d.tolerance)?,
    };
    let sys = SymbolicSystem::full_shift(cc.branch_count(), 0.5)?;
    inp.budget(&sys, max_of(&params.bowen.n_range) + params.bowen.m + params.locality)?;
    let r = hausdorff_dimension_cookie_cutter(&cc, &params)?;
    let mut summary = format!("s0 bracket [{:.6}, {:.6}]\n", r.s0.lo, r.s0.hi);
    for e in &r.entries {
        let _ = writeln!(summary, "{}: {:.6} in [{:.6}, {:.6}]", e.which.name(), e.value, e.bracket.lo, e.bracket.hi);
    }
    if let Some(t) = r.triangle_residual {
        let _ = writeln!(summary, "triangle residual |s0 - h/lambda| at the equilibrium measure: {t:.3e}");
    }
    let _ = writeln!(
        summary,
        "box estimate consistent with the root: {}; measure dimension below the root: {}",
        r.box_ordered, r.measure_below_root
    );
    let passed = r.box_ordered && r.measure_below_root && r.triangle_residual.is_none_or(|t| t <= params.tolerance);
    Ok(Outcome {
        csv: csv_of(|b| formats::write_dimension_csv(b, &r, &inp.cfg.fingerprint()))?,
        summary,
        passed,
    })
}

fn generic(inp: &Inputs<'_>) -> Result<Outcome> {
    let sys = inp.system()?;
    let mu = inp.measure(&sys)?;
    let pot = inp.potential(&sys)?;
    let d = GenericParams::default();
    let params = GenericParams {
        sample_count: inp.cfg.get_or("samples", d.sample_count)?,
        orbit_len: inp.cfg.get_or("orbit_len", d.orbit_len)?,
        depth: inp.cfg.get_or("depth", d.depth)?,
        m: inp.m,
        tolerance: inp.cfg.get_or("tolerance", d.tolerance)?,
        seed: inp.cfg.get_or("seed", d.seed)?,
        weighting: inp.weighting,
        kingman: inp.kingman()?,
        cap: inp.cap,
    };
    let r = generic_set_pressure(&sys, &pot, &mu, &params)?;
    let e = &r.estimate;
    let mut summary = describe(e);
    let _ = writeln!(
        summary,
        "generic-set residual: value - (h + F_*) = {:.6} - ({:.6} + {:.6}) = {:.3e}; {} of {} samples generic, {} distinct cylinders",
        e.value,
        r.entropy,
        r.kingman_value,
        e.value - r.target,
        r.passed,
        params.sample_count,
        r.distinct_cylinders
    );
    Ok(Outcome {
        csv: csv_of(|b| formats::write_pressure_csv(b, std::slice::from_ref(e)))?,
        summary,
        passed: true,
    })
}
