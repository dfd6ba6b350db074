use pressurekit_core::linalg::SmallMatrix;
use pressurekit_core::pressure::{
    capacity_pressure, caratheodory_m, caratheodory_pressure, measure_pressure, topological_pressure,
    transfer_pressure_exact, CoverProblem, ZSet,
};
use pressurekit_core::measures::kingman_limit;
use pressurekit_core::{
    BallWeighting, KingmanParams, MarkovMeasure, PotentialSequence, SymbolicSystem, Word, DEFAULT_WORD_CAP,
};

const CAP: u64 = DEFAULT_WORD_CAP;

fn full() -> SymbolicSystem {
    SymbolicSystem::full_shift(2, 0.5).unwrap()
}

fn words(ws: &[&str]) -> ZSet {
    ZSet::Words(ws.iter().map(|w| Word::parse(w).unwrap()).collect())
}

fn diag_norm() -> PotentialSequence {
    PotentialSequence::cocycle_norm(vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])]).unwrap()
}

fn log_m(z: ZSet, pot: &PotentialSequence, s: f64, n: usize) -> f64 {
    let p = CoverProblem { z, n_min: n, depth_cap: n + 3 };
    caratheodory_m(&p, &full(), pot, 0, BallWeighting::Sup, s, CAP).unwrap().log_m
}

#[test]
fn m_is_monotone_in_z_and_subadditive_over_unions() {
    let pot = PotentialSequence::birkhoff(2, 1, vec![0.4, -0.3]).unwrap();
    for &s in &[0.0, 0.5, 1.0] {
        for n in [3, 5] {
            let small = log_m(words(&["00"]), &pot, s, n);
            let mid = log_m(words(&["00", "011"]), &pot, s, n);
            let big = log_m(words(&["0"]), &pot, s, n);
            let other = log_m(words(&["11"]), &pot, s, n);
            let union = log_m(words(&["0", "11"]), &pot, s, n);
            assert!(small <= mid + 1e-12 && mid <= big + 1e-12);
            assert!(union.exp() <= big.exp() + other.exp() + 1e-9);
        }
    }
}

#[test]
fn m_is_non_increasing_in_s() {
    let pot = diag_norm();
    let mut last = f64::INFINITY;
    for i in 0..20 {
        let v = log_m(ZSet::Full, &pot, -0.5 + 0.15 * i as f64, 4);
        assert!(v <= last + 1e-12);
        last = v;
    }
}

#[test]
fn ordering_of_cover_pressures() {
    let pots = [
        diag_norm(),
        PotentialSequence::cocycle_min_norm(vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])])
            .unwrap(),
        PotentialSequence::birkhoff(2, 1, vec![0.2, -0.6]).unwrap(),
    ];
    for pot in &pots {
        for z in [ZSet::Full, words(&["01", "110"])] {
            // compare at matched N: a uniform-depth cover is one admissible cover
            let p = CoverProblem { z, n_min: 6, depth_cap: 12 };
            let car = caratheodory_pressure(&p, &full(), pot, 0, BallWeighting::Sup, &[6, 10], 1e-4, CAP).unwrap();
            let (lo, hi) = capacity_pressure(&p, &full(), pot, 0, BallWeighting::Sup, &[6, 8, 10], CAP).unwrap();
            let slack = lo.width() + hi.width() + car.root_bracket.width() + 1e-9;
            assert!(car.root_bracket.lo <= lo.value + slack, "{car:?} {lo:?}");
            assert!(lo.value <= hi.value + 1e-12);
        }
    }
}

#[test]
fn capacity_is_monotone_in_z() {
    let pot = diag_norm();
    let range = [4, 6, 8];
    let get = |z| {
        let p = CoverProblem { z, n_min: 4, depth_cap: 8 };
        capacity_pressure(&p, &full(), &pot, 0, BallWeighting::Sup, &range, CAP).unwrap()
    };
    let (a, b) = get(words(&["010"]));
    let (c, d) = get(words(&["01"]));
    let (e, f) = get(ZSet::Full);
    for i in 0..range.len() {
        assert!(a.per_n[i].value <= c.per_n[i].value + 1e-12 && c.per_n[i].value <= e.per_n[i].value + 1e-12);
    }
    assert!(a.value <= c.value + 1e-12 && c.value <= e.value + 1e-12);
    assert!(b.value <= d.value + 1e-12 && d.value <= f.value + 1e-12);
}

#[test]
fn epsilon_stability_of_topological_pressure() {
    let sys = SymbolicSystem::golden_mean(0.5).unwrap();
    let pot = PotentialSequence::birkhoff(2, 2, vec![0.1, -0.4, 0.9, 0.0]).unwrap();
    let range: Vec<usize> = (4..=18).collect();
    let exact = transfer_pressure_exact(&sys, &pot).unwrap();
    let ests: Vec<_> = (0..=2)
        .map(|m| topological_pressure(&sys, &pot, m, &range, BallWeighting::Sup, CAP).unwrap())
        .collect();
    for e in &ests {
        assert!(e.lower <= exact + 1e-9 && exact <= e.upper + 1e-9, "{e:?} vs {exact}");
    }
    for pair in ests.windows(2) {
        let tol = 2.0 * (pair[0].width() + pair[1].width());
        assert!((pair[0].value - pair[1].value).abs() <= tol);
    }
}

#[test]
fn delta_independence_and_variational_direction() {
    let sys = full();
    let mu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
    let pot = diag_norm();
    let range: Vec<usize> = (40..=200).step_by(40).collect();
    let ests: Vec<_> = [0.1, 0.3, 0.5]
        .iter()
        .map(|&d| measure_pressure(&sys, &pot, &mu, 0, d, &range, BallWeighting::Center, CAP).unwrap())
        .collect();
    let top = topological_pressure(&sys, &pot, 0, &(8..=16).collect::<Vec<_>>(), BallWeighting::Center, CAP).unwrap();
    let widest = ests.iter().map(|e| e.width()).fold(0.0, f64::max);
    for e in &ests {
        assert!((e.value - ests[0].value).abs() <= 2.0 * widest + 0.02, "{ests:?}");
        assert!(e.value <= top.upper + 0.02);
    }
}

#[test]
fn negation_mirrors_kingman_exactly() {
    let sys = full();
    let mu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
    let params = KingmanParams { n_exact: 10, mc_orbits: 8, mc_length: 1000, ..KingmanParams::default() };
    for f in [PotentialSequence::birkhoff(2, 1, vec![0.5, -1.5]).unwrap(), diag_norm()] {
        let neg = PotentialSequence::scaled(-1.0, &f);
        let a = kingman_limit(&f, &mu, &sys, &params).unwrap();
        let b = kingman_limit(&neg, &mu, &sys, &params).unwrap();
        for (x, y) in a.upper_bounds.iter().zip(&b.upper_bounds) {
            assert_eq!(x.1, -y.1);
        }
        assert!((a.value + b.value).abs() < 1e-12);
        assert!((a.lower + b.upper).abs() < 1e-12 && (a.upper + b.lower).abs() < 1e-12);
    }
}

#[test]
fn zero_potential_counts_words() {
    let pot = PotentialSequence::zero(2).unwrap();
    let range: Vec<usize> = (1..=16).collect();
    let est = topological_pressure(&full(), &pot, 0, &range, BallWeighting::Sup, CAP).unwrap();
    assert!(est.per_n.iter().all(|p| (p.value - 2f64.ln()).abs() < 1e-12));
    assert!(est.certified);
}
