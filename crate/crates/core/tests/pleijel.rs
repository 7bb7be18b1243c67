mod common;

use common::oracle;
use robin_ball::pleijel::{line_kind, pleijel_scan, quotient, running_quotients};
use robin_ball::{nodal_count_2d, Error, LineKind, ProblemSpec, Solver};

fn dirichlet() -> ProblemSpec {
    ProblemSpec::dirichlet(2).unwrap()
}

#[test]
fn nodal_count_examples() {
    let d = dirichlet();
    assert_eq!(nodal_count_2d(&d, 0, 3, LineKind::DirichletZero).unwrap(), 3);
    assert_eq!(nodal_count_2d(&d, 3, 2, LineKind::DirichletZero).unwrap(), 12);
    let r = ProblemSpec::robin(2, "1").unwrap();
    assert_eq!(nodal_count_2d(&r, 2, 1, LineKind::RobinPositive).unwrap(), 4);
    assert!(matches!(
        nodal_count_2d(&ProblemSpec::dirichlet(3).unwrap(), 0, 1, LineKind::DirichletZero),
        Err(Error::Dimension(3))
    ));
}

#[test]
fn radial_bands_follow_bessel_zeros_inside_the_disk() {
    // J_m(x r) changes sign at r = j_{m,i} / x, so the bands number one more
    // than the Bessel zeros strictly below the radial root.
    let solver = Solver::default();
    for sigma in ["-2.5", "-1", "0", "1", "7"] {
        let spec = ProblemSpec::robin(2, sigma).unwrap();
        for m in 0..=6u32 {
            let zeros = oracle::j_zeros(2 * m, 12);
            for k in 1..=6u32 {
                let kind = line_kind(&spec, m, k);
                let n = nodal_count_2d(&spec, m, k, kind).unwrap();
                let sectors = u64::from((2 * m).max(1));
                let bands = if kind == LineKind::RobinZero {
                    1
                } else {
                    let x = solver.robin_root(&spec, m, k).unwrap().root;
                    1 + zeros.iter().filter(|&&z| z < x).count() as u64
                };
                assert_eq!(n, sectors * bands, "sigma={sigma} ({m}, {k})");
            }
        }
        for m in 0..=6u32 {
            if solver.negative_robin_root(&spec, m).unwrap().is_some() {
                assert_eq!(nodal_count_2d(&spec, m, 0, LineKind::RobinNegative).unwrap(), u64::from((2 * m).max(1)));
            }
        }
    }
}

#[test]
fn first_quotients() {
    let d = dirichlet();
    let q = quotient(&d, 0, 1).unwrap();
    assert_eq!((q.nodal_count, q.index), (1, 1));
    assert_eq!(q.quotient, 1.0);
    let q = quotient(&d, 1, 1).unwrap();
    assert_eq!((q.nodal_count, q.index), (2, 2));
    assert_eq!(q.quotient, 1.0);
    let spec = ProblemSpec::robin(2, "-2.5").unwrap();
    let q = quotient(&spec, 0, 0).unwrap();
    assert_eq!((q.nodal_count, q.index), (1, 1));
    assert!(q.eigenvalue < 0.0);
}

#[test]
fn single_mode_scan() {
    let s = pleijel_scan(&dirichlet(), 1, 1, 0.0).unwrap();
    assert_eq!(s.supremum, 1.0);
    assert_eq!((s.argmax.m, s.argmax.k), (0, 1));
    assert_eq!(s.scanned, 2);
}

#[test]
fn scan_matches_per_mode_quotients() {
    let solver = Solver::default();
    for spec in [dirichlet(), ProblemSpec::robin(2, "1").unwrap(), ProblemSpec::robin(2, "-1").unwrap()] {
        let burn_in = 60.0;
        let scan = solver.pleijel_scan(&spec, 10, 10, burn_in).unwrap();
        let mut best: Option<robin_ball::QuotientRecord> = None;
        let mut count = 0;
        for m in 0..=10 {
            for k in 1..=10 {
                let q = solver.quotient(&spec, m, k).unwrap();
                if q.eigenvalue < burn_in {
                    continue;
                }
                count += 1;
                if best.map_or(true, |b| q.cmp_quotient(&b).is_gt()) {
                    best = Some(q);
                }
            }
        }
        let best = best.unwrap();
        assert_eq!(scan.scanned, count);
        assert_eq!(scan.supremum, best.quotient, "{}", spec.label());
        assert_eq!(scan.argmax, best.mode);
        for r in &scan.records {
            let q = solver.quotient(&spec, r.mode.m, r.mode.k).unwrap();
            assert_eq!((q.nodal_count, q.index), (r.nodal_count, r.index));
        }
    }
}

#[test]
fn scan_supremum_grows_with_cutoffs() {
    let spec = ProblemSpec::robin(2, "1").unwrap();
    let a = pleijel_scan(&spec, 60, 30, 100.0).unwrap();
    let b = pleijel_scan(&spec, 60, 60, 100.0).unwrap();
    assert!(b.supremum >= a.supremum);
    let g = robin_ball::spectrum::gamma_d(2).unwrap();
    assert!(b.records.iter().all(|r| r.quotient < g));
}

#[test]
fn records_are_sorted() {
    let s = pleijel_scan(&dirichlet(), 40, 40, 50.0).unwrap();
    for w in s.records.windows(2) {
        assert!(w[0].cmp_quotient(&w[1]).is_ge());
    }
    assert_eq!(s.records[0].quotient, s.supremum);
}

#[test]
fn running_quotients_respect_courant() {
    for spec in [dirichlet(), ProblemSpec::robin(2, "1").unwrap(), ProblemSpec::robin(2, "-2.5").unwrap()] {
        let rq = running_quotients(&spec, 2000).unwrap();
        assert_eq!(rq.len(), 2000);
        assert_eq!(rq[0].quotient, 1.0);
        let mut prev = 0.0;
        for (i, r) in rq.iter().enumerate() {
            assert_eq!(r.index, i as u64 + 1);
            assert!(r.nodal_count <= r.index, "{} at {}", spec.label(), r.index);
            assert!(r.running_max >= prev);
            prev = r.running_max;
        }
    }
}

#[test]
fn pleijel_is_two_dimensional() {
    let spec = ProblemSpec::robin(3, "1").unwrap();
    assert!(matches!(pleijel_scan(&spec, 5, 5, 0.0), Err(Error::Dimension(3))));
    assert!(matches!(running_quotients(&spec, 5), Err(Error::Dimension(3))));
}
