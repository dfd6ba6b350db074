use pressurekit_core::dimension::{
    bowen_root, dimension_of_measure, hausdorff_dimension_cookie_cutter, lyapunov_pair, BowenParams, Branch,
    CookieCutter, DimensionParams, LyapunovSource,
};
use pressurekit_core::pressure::topological_pressure;
use pressurekit_core::{BallWeighting, KingmanParams, MarkovMeasure, PotentialSequence, SymbolicSystem};

fn moran() -> CookieCutter {
    CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)]).unwrap()
}

fn wobbly() -> CookieCutter {
    let mid = 0.5 * (1.0 / 3.2 + 1.0 / 2.8);
    let amp = 0.5 * (1.0 / 2.8 - 1.0 / 3.2);
    CookieCutter::new(vec![
        Branch::Sine { slope: mid, offset: 0.0, amplitude: amp },
        Branch::Sine { slope: mid, offset: 1.0 - mid, amplitude: amp },
    ])
    .unwrap()
}

fn quick_kingman() -> KingmanParams {
    KingmanParams { n_exact: 10, mc_orbits: 16, mc_length: 2000, ..KingmanParams::default() }
}

#[test]
fn derivative_potentials_are_conformal() {
    let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
    let mu = MarkovMeasure::bernoulli(&[0.6, 0.4]).unwrap();
    for cc in [CookieCutter::middle_third(), moran(), wobbly()] {
        let f = cc.derivative_potential(3).unwrap();
        let r = lyapunov_pair(&sys, LyapunovSource::Derivative(&f), &mu, &quick_kingman(), 1e-12).unwrap();
        assert_eq!(r.defect, 0.0);
        assert!(r.average_conformal);
    }
}

#[test]
fn bisection_certificate_holds_at_the_ends() {
    let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
    for cc in [CookieCutter::middle_third(), moran()] {
        let f = cc.derivative_potential(1).unwrap();
        let params = BowenParams::default();
        let r = bowen_root(&sys, &f, &params).unwrap();
        let p = |s: f64| {
            let g = PotentialSequence::scaled(-s, &f);
            topological_pressure(&sys, &g, 0, &params.n_range, BallWeighting::Sup, params.cap).unwrap()
        };
        assert!(p(r.certified.lo).lower > 0.0);
        assert!(p(r.certified.hi).upper < 0.0);
    }
}

#[test]
fn triangle_and_box_on_self_similar_cutters() {
    for (cc, s0) in [(CookieCutter::middle_third(), 2f64.ln() / 3f64.ln()), (moran(), 0.694242)] {
        let r = hausdorff_dimension_cookie_cutter(&cc, &DimensionParams::default()).unwrap();
        assert!(r.s0.distance(s0) < 1e-4, "{:?}", r.s0);
        assert!(r.triangle_residual.unwrap() <= 1e-3);
        assert!((r.box_estimate.fit - s0).abs() <= 0.03, "{:?}", r.box_estimate);
        assert!(r.measure_below_root);
    }
}

#[test]
fn measures_never_exceed_the_root() {
    let cc = moran();
    let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
    let f = cc.derivative_potential(1).unwrap();
    let s0 = 0.694242;
    for p in [0.1, 0.3, 0.5, 0.62, 0.8, 0.95] {
        let mu = MarkovMeasure::bernoulli(&[p, 1.0 - p]).unwrap();
        let r = lyapunov_pair(&sys, LyapunovSource::Derivative(&f), &mu, &quick_kingman(), 1e-9).unwrap();
        let d = dimension_of_measure(&mu, &r).unwrap();
        assert!(d.lo <= s0 + 1e-3, "p={p}: {d:?}");
    }
}
