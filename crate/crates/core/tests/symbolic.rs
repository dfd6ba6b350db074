use pressurekit_core::{Error, SymbolicSystem};
use proptest::prelude::*;

fn brute_count(sys: &SymbolicSystem, n: usize) -> u64 {
    let k = sys.alphabet_size();
    let mut count = 0;
    let mut w = vec![0u8; n];
    for code in 0..(k as u64).pow(n as u32) {
        let mut c = code;
        for s in w.iter_mut().rev() {
            *s = (c % k as u64) as u8;
            c /= k as u64;
        }
        if sys.is_admissible(&w) {
            count += 1;
        }
    }
    count
}

fn matrix_power_sum(sys: &SymbolicSystem, n: usize) -> u64 {
    let a = sys.transition();
    let k = a.len();
    let mut v = vec![1u64; k];
    for _ in 1..n {
        v = (0..k).map(|i| (0..k).map(|j| a[i][j] as u64 * v[j]).sum()).collect();
    }
    v.iter().sum()
}

fn systems() -> Vec<SymbolicSystem> {
    vec![
        SymbolicSystem::full_shift(2, 0.5).unwrap(),
        SymbolicSystem::golden_mean(0.5).unwrap(),
        SymbolicSystem::full_shift(3, 1.0 / 3.0).unwrap(),
        SymbolicSystem::new(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]], 0.4).unwrap(),
    ]
}

#[test]
fn word_counts_match_matrix_powers_and_brute_force() {
    for sys in systems() {
        let top = if sys.alphabet_size() == 2 { 12 } else { 8 };
        for n in 1..=top {
            let words = sys.enumerate_words(n).unwrap();
            assert_eq!(words.len() as u64, matrix_power_sum(&sys, n));
            assert_eq!(sys.word_count(n), brute_count(&sys, n));
        }
    }
}

#[test]
fn enumeration_is_strictly_increasing() {
    for sys in systems() {
        let words = sys.enumerate_words(7).unwrap();
        assert!(words.windows(2).all(|p| p[0].symbols() < p[1].symbols()));
        assert!(words.iter().all(|w| sys.is_admissible(w.symbols())));
    }
}

fn d_n(theta: f64, x: &[u8], y: &[u8], n: usize) -> f64 {
    (0..n)
        .map(|i| match (i..x.len()).find(|&j| x[j] != y[j]) {
            Some(j) => theta.powi((j - i) as i32),
            None => 0.0,
        })
        .fold(0.0, f64::max)
}

#[test]
fn bowen_ball_inclusion_both_ways() {
    for sys in systems() {
        let len = if sys.alphabet_size() == 2 { 10 } else { 7 };
        let theta = sys.theta();
        let words = sys.enumerate_words(len).unwrap();
        for &eps in &[1.0, 0.5, 0.3, 0.1, 0.05] {
            let m = sys.extra_depth(eps).unwrap();
            for n in 1..=3 {
                let depth = sys.bowen_ball_depth(n, eps).unwrap();
                assert_eq!(depth, n + m);
                for x in words.iter().step_by(13) {
                    for y in &words {
                        let (x, y) = (x.symbols(), y.symbols());
                        let shared = x.iter().zip(y).take_while(|(a, b)| a == b).count();
                        let d = d_n(theta, x, y, n);
                        if shared >= depth {
                            assert!(d < eps / theta + 1e-12);
                        }
                        if d < theta.powi(m as i32 + 1) {
                            assert!(shared >= depth);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn canonical_points_are_deterministic_and_admissible() {
    for sys in systems() {
        for w in sys.enumerate_words(4).unwrap() {
            let a = sys.canonical_point(w.symbols()).unwrap();
            let b = sys.canonical_point(w.symbols()).unwrap();
            let pa = a.take(100);
            assert_eq!(pa, b.take(100));
            assert!(sys.is_admissible(&pa));
            assert_eq!(&pa[..4], w.symbols());
        }
    }
}

#[test]
fn separated_set_sizes() {
    let full = SymbolicSystem::full_shift(2, 0.5).unwrap();
    assert_eq!(full.maximal_separated_set(2, 1.0).unwrap().len(), 4);
    assert_eq!(full.maximal_separated_set(2, 0.5).unwrap().len(), 8);
    let golden = SymbolicSystem::golden_mean(0.5).unwrap();
    assert_eq!(golden.maximal_separated_set(3, 1.0).unwrap().len(), 5);
}

#[test]
fn constructor_rejections() {
    assert!(SymbolicSystem::new(&[vec![1, 1], vec![0, 0]], 0.5).is_err());
    assert!(SymbolicSystem::new(&[vec![1, 1], vec![1, 1]], 1.0).is_err());
    assert!(SymbolicSystem::new(&[vec![1, 2], vec![1, 1]], 0.5).is_err());
    let full = SymbolicSystem::full_shift(2, 0.5).unwrap();
    assert!(matches!(full.bowen_ball_depth(3, 0.0), Err(Error::InvalidEpsilon(_))));
    assert_eq!(full.bowen_ball_depth(3, 5.0).unwrap(), 3);
}

proptest! {
    #[test]
    fn depth_formula(theta in 0.05f64..0.95, eps in 1e-4f64..1.0, n in 1usize..50) {
        let sys = SymbolicSystem::full_shift(2, theta).unwrap();
        let d = sys.bowen_ball_depth(n, eps).unwrap();
        prop_assert!(d >= n);
        let m = (d - n) as i32;
        // θ^m ≤ ε < θ^{m-1}, up to the integer snap
        prop_assert!(theta.powi(m) <= eps * (1.0 + 1e-8));
        if m > 0 {
            prop_assert!(eps < theta.powi(m - 1) * (1.0 + 1e-8));
        }
    }
}
