use pressurekit::formats::*;
use pressurekit_core::pressure::{CoverProblem, ZSet};
use pressurekit_core::{MarkovMeasure, SymbolicSystem, Word};

#[test]
fn system_and_measure_round_trip() {
    let sys = SymbolicSystem::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 0.25).unwrap();
    assert_eq!(parse_system(&write_system(&sys)).unwrap(), sys);
    let mu = MarkovMeasure::new(&[vec![0.5, 0.5, 0.0], vec![0.0, 0.2, 0.8], vec![0.9, 0.0, 0.1]]).unwrap();
    let back = parse_measure(&write_measure(&mu)).unwrap();
    assert_eq!(back, mu);
}

#[test]
fn cover_round_trip() {
    let p = CoverProblem {
        z: ZSet::Words(vec![Word(vec![0, 1]), Word(vec![1, 1, 0])]),
        n_min: 4,
        depth_cap: 9,
    };
    assert_eq!(parse_cover(&write_cover(&p)).unwrap(), p);
    let full = parse_cover("n_min 3\ndepth_cap 5\nfull\n").unwrap();
    assert_eq!(full.z, ZSet::Full);
}

#[test]
fn errors_name_the_line() {
    let cases = [
        (parse_system("2 0.5\n1 1\n1 2\n").map(|_| ()), "line 3"),
        (parse_measure("2\n0.5 0.5\n# note\n0.3 x\n").map(|_| ()), "line 4"),
        (parse_potential("birkhoff 2 2\n00 1\n012 3\n").map(|_| ()), "line 3"),
        (parse_cutter("branches 2\naffine 0.3 0\ncubic 1 2\n").map(|_| ()), "line 3"),
    ];
    for (res, needle) in cases {
        let e = res.unwrap_err().to_string();
        assert!(e.contains(needle), "{e}");
    }
}

#[test]
fn potential_kinds() {
    let p = parse_potential("birkhoff 2 2\n01 1.5\n# missing words are 0\n").unwrap();
    assert_eq!(p.evaluate(&[0, 1, 1], 2), 1.5);
    let c = parse_potential("cocycle_norm 2 2\n2 0\n0 0.5\n0.5 0\n0 2\n").unwrap();
    assert!((c.evaluate(&[0, 0, 1], 3) - 2f64.ln()).abs() < 1e-12);
    let m = parse_potential("cocycle_min_norm 2 2\n2 0\n0 0.5\n0.5 0\n0 2\nscale -1\n").unwrap();
    assert!((m.evaluate(&[0, 0], 2) - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn cutter_branches_must_match_header() {
    assert!(parse_cutter("branches 3\naffine 0.3 0\naffine 0.3 0.7\n").is_err());
    let c = parse_cutter("branches 2\naffine 0.5 0\naffine 0.25 0.75\n").unwrap();
    assert_eq!(c.branch_count(), 2);
}
