use pressurekit_core::linalg::SmallMatrix;
use pressurekit_core::measures::{
    brin_katok_estimate, exact_expectations, katok_entropy_estimate, kingman_limit, stationary_vector,
};
use pressurekit_core::{Error, KingmanParams, MarkovMeasure, Mode, PotentialSequence, SymbolicSystem, DEFAULT_WORD_CAP};

fn instances() -> Vec<(SymbolicSystem, MarkovMeasure)> {
    vec![
        (
            SymbolicSystem::full_shift(2, 0.5).unwrap(),
            MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap(),
        ),
        (
            SymbolicSystem::golden_mean(0.5).unwrap(),
            MarkovMeasure::new(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap(),
        ),
        (
            SymbolicSystem::full_shift(3, 0.5).unwrap(),
            MarkovMeasure::new(&[vec![0.2, 0.3, 0.5], vec![0.6, 0.1, 0.3], vec![0.3, 0.3, 0.4]]).unwrap(),
        ),
    ]
}

#[test]
fn cylinder_measures_sum_to_one() {
    for (sys, mu) in instances() {
        let top = if sys.alphabet_size() == 2 { 12 } else { 8 };
        for n in 1..=top {
            let total: f64 = sys.enumerate_words(n).unwrap().iter().map(|w| mu.cylinder_measure(w.symbols())).sum();
            assert!((total - 1.0).abs() < 1e-10, "n={n}: {total}");
        }
    }
}

#[test]
fn shift_invariance() {
    for (sys, mu) in instances() {
        let k = sys.alphabet_size() as u8;
        for n in 1..=6 {
            for w in sys.enumerate_words(n).unwrap() {
                let lhs: f64 = (0..k)
                    .map(|a| {
                        let mut aw = vec![a];
                        aw.extend_from_slice(w.symbols());
                        mu.cylinder_measure(&aw)
                    })
                    .sum();
                assert!((lhs - mu.cylinder_measure(w.symbols())).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn stationary_examples() {
    let pi = stationary_vector(&[0.5, 0.5, 1.0, 0.0], 2).unwrap();
    assert!((pi[0] - 2.0 / 3.0).abs() < 1e-12 && (pi[1] - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(stationary_vector(&[1.0, 0.0, 0.0, 1.0], 2), Err(Error::NonErgodic));
    let mu = MarkovMeasure::new(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
    assert!((mu.cylinder_measure(&[0, 1, 0]) - 1.0 / 3.0).abs() < 1e-12);
    assert!((mu.entropy_exact() - 2.0 / 3.0 * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn kingman_doubling_is_monotone() {
    let cocycles = [
        vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])],
        vec![
            SmallMatrix::from_rows(&[vec![2.0, 1.0], vec![0.5, 1.0]]).unwrap(),
            SmallMatrix::from_rows(&[vec![0.3, -1.2], vec![1.0, 0.8]]).unwrap(),
        ],
    ];
    for (sys, mu) in instances().into_iter().filter(|(s, _)| s.alphabet_size() == 2) {
        for ms in &cocycles {
            let f = PotentialSequence::cocycle_norm(ms.clone()).unwrap();
            let e = exact_expectations(&f, &mu, &sys, 16, DEFAULT_WORD_CAP).unwrap();
            let mut n = 1;
            while 2 * n <= e.len() {
                let (a, b) = (e[n - 1] / n as f64, e[2 * n - 1] / (2 * n) as f64);
                assert!(b <= a + 1e-9, "n={n}: {a} -> {b}");
                n *= 2;
            }
        }
    }
}

#[test]
fn kingman_bracket_respects_upper_bounds() {
    let (sys, mu) = instances().remove(0);
    let f = PotentialSequence::cocycle_norm(vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])]).unwrap();
    let params = KingmanParams { n_exact: 14, ..KingmanParams::default() };
    let b = kingman_limit(&f, &mu, &sys, &params).unwrap();
    assert_eq!(b.mode, Mode::Subadditive);
    for &(_, u) in &b.upper_bounds {
        assert!(u >= b.value - 3.0 * b.mc_stderr);
    }
    assert!((b.value - 0.4 * 2f64.ln()).abs() < 0.02, "{b:?}");
}

#[test]
fn katok_is_monotone_in_delta() {
    for (sys, mu) in instances().into_iter().filter(|(s, _)| s.alphabet_size() == 2) {
        let mut last = f64::INFINITY;
        for delta in [0.01, 0.05, 0.1, 0.3, 0.5, 0.9] {
            let r = katok_entropy_estimate(&mu, &sys, 0, delta, 14).unwrap().rate;
            assert!(r <= last + 1e-12);
            last = r;
        }
    }
}

#[test]
fn katok_uniform_half() {
    let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
    let mu = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
    let r = katok_entropy_estimate(&mu, &sys, 0, 0.5, 10).unwrap();
    assert_eq!(r.count, 512);
    assert!((r.rate - 0.9 * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn brin_katok_uniform_is_exact() {
    let mu = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
    let x = mu.sample_orbit(600, 7);
    let grid: Vec<usize> = (1..=500).step_by(37).collect();
    let bk = brin_katok_estimate(&mu, &x, 0, &grid).unwrap();
    assert!(bk.per_n.iter().all(|&(_, v)| (v - 2f64.ln()).abs() < 1e-12));
}

#[test]
fn sampling_is_reproducible_with_correct_marginal() {
    let mu = MarkovMeasure::new(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
    assert_eq!(mu.sample_orbit(300, 11), mu.sample_orbit(300, 11));
    let trials = 20_000;
    let ones = (0..trials).filter(|&s| mu.sample_orbit(1, s)[0] == 1).count() as f64;
    let p = 1.0 / 3.0;
    let sd = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((ones / trials as f64 - p).abs() < 4.0 * sd);
}
