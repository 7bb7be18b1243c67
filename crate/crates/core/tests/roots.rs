mod common;

use common::oracle;
use robin_ball::spectrum::{count_dirichlet_zeros_below, count_robin_roots_below, negative_robin_root};
use robin_ball::{Error, Order, ProblemSpec, Solver, RESIDUAL_TOL};
use std::f64::consts::PI;

fn order(nu: f64) -> Order {
    Order::new(nu).unwrap()
}

#[test]
fn half_order_zeros_are_multiples_of_pi() {
    let zs = Solver::default().dirichlet_zeros(order(0.5), 1000).unwrap();
    for (k, z) in zs.iter().enumerate() {
        let want = (k + 1) as f64 * PI;
        assert!((z.root - want).abs() / want <= 1e-10, "k={}", k + 1);
        assert!(z.bracket.0 < z.root && z.root < z.bracket.1);
        assert!(z.residual <= RESIDUAL_TOL);
    }
}

#[test]
fn dirichlet_zeros_match_series_oracle() {
    let solver = Solver::default();
    for twice_nu in [0u32, 1, 2, 20] {
        let want = oracle::j_zeros(twice_nu, 40);
        let got = solver.dirichlet_zeros(order(f64::from(twice_nu) / 2.0), 40).unwrap();
        for (k, (g, w)) in got.iter().zip(&want).enumerate() {
            assert!((g.root - w).abs() / w <= 1e-10, "nu={} k={}: {} vs {w}", twice_nu / 2, k + 1, g.root);
        }
    }
}

#[test]
fn first_zeros_of_j0_and_j1() {
    let s = Solver::default();
    assert!((s.dirichlet_zero(order(0.0), 1).unwrap().root - 2.4048255577).abs() < 1e-9);
    assert!((s.dirichlet_zero(order(1.0), 1).unwrap().root - 3.8317059702).abs() < 1e-9);
    assert!(matches!(s.dirichlet_zero(order(1.0), 0), Err(Error::InvalidSpec(_))));
}

#[test]
fn dirichlet_counts() {
    for nu in [0.0, 3.0, 17.5] {
        assert_eq!(count_dirichlet_zeros_below(order(nu), nu).unwrap(), 0);
        assert_eq!(count_dirichlet_zeros_below(order(nu), 0.5 * nu + 0.1).unwrap(), 0);
    }
    assert_eq!(count_dirichlet_zeros_below(order(0.5), 10.0).unwrap(), 3);
    assert_eq!(count_dirichlet_zeros_below(order(0.0), 10.0).unwrap(), 3);
}

#[test]
fn dirichlet_count_brackets_every_oracle_zero() {
    let zs = oracle::j_zeros(2, 30);
    for (k, z) in zs.iter().enumerate() {
        assert_eq!(count_dirichlet_zeros_below(order(1.0), z * (1.0 - 1e-9)).unwrap(), k as u64);
        assert_eq!(count_dirichlet_zeros_below(order(1.0), z * (1.0 + 1e-9)).unwrap(), k as u64 + 1);
    }
}

#[test]
fn neumann_root_of_j1_prime() {
    let spec = ProblemSpec::robin(2, "0").unwrap();
    let r = Solver::default().robin_root(&spec, 1, 1).unwrap();
    assert!((r.root - 1.8411837813).abs() < 1e-9, "{}", r.root);
}

#[test]
fn neumann_radial_mode_is_constant() {
    let spec = ProblemSpec::robin(2, "0").unwrap();
    let s = Solver::default();
    let r = s.robin_root(&spec, 0, 1).unwrap();
    assert_eq!(r.root, 0.0);
    // the next radial root of J_0' is j_{1,1}
    let r2 = s.robin_root(&spec, 0, 2).unwrap();
    assert!((r2.root - 3.8317059702).abs() < 1e-9);
}

#[test]
fn large_sigma_approaches_dirichlet() {
    let spec = ProblemSpec::robin(2, "1e6").unwrap();
    let r = Solver::default().robin_root(&spec, 0, 1).unwrap().root;
    assert!((r - 2.4048255577).abs() <= 1e-3);
    assert!(r < 2.4048255577);
}

#[test]
fn robin_roots_solve_the_boundary_equation() {
    // d = 3, m = 0: J_{1/2} ~ sin x / sqrt x gives x J'/J = x cot x - 1/2, so the
    // boundary equation x J'/J = 1/2 - sigma reads x cos x = (1 - sigma) sin x.
    for sigma in ["-0.5", "0.7", "5", "-3"] {
        let spec = ProblemSpec::robin(3, sigma).unwrap();
        let s: f64 = sigma.parse().unwrap();
        for r in Solver::default().robin_roots(&spec, 0, 25).unwrap() {
            let x = r.root;
            let lhs = x * x.cos() - (1.0 - s) * x.sin();
            assert!(lhs.abs() < 1e-10 * (1.0 + x), "sigma={sigma} x={x}: {lhs}");
        }
    }
}

#[test]
fn robin_count_agrees_with_solved_roots() {
    let spec = ProblemSpec::robin(2, "1").unwrap();
    let s = Solver::default();
    for m in 0..=20 {
        let roots = s.robin_roots(&spec, m, 30).unwrap();
        for i in 1..=60 {
            let x = i as f64;
            let brute = roots.iter().filter(|r| r.root <= x).count() as u64;
            assert_eq!(count_robin_roots_below(&spec, m, x).unwrap(), brute, "m={m} x={x}");
        }
    }
}

#[test]
fn robin_count_small_cases() {
    let neumann = ProblemSpec::robin(2, "0").unwrap();
    assert_eq!(count_robin_roots_below(&neumann, 1, 2.0).unwrap(), 1);
    assert_eq!(count_robin_roots_below(&neumann, 1, 1.0).unwrap(), 0);
    let spec = ProblemSpec::robin(2, "2").unwrap();
    assert_eq!(count_robin_roots_below(&spec, 3, 0.5).unwrap(), 0);
    assert!(count_robin_roots_below(&ProblemSpec::dirichlet(2).unwrap(), 0, 1.0).is_err());
}

#[test]
fn negative_root_matches_modified_series_oracle() {
    let spec = ProblemSpec::robin(2, "-1").unwrap();
    let r = negative_robin_root(&spec, 0).unwrap().unwrap();
    let want = oracle::negative_root(0.0, -1.0).unwrap();
    assert!((r.root - want).abs() <= 1e-12 * want, "{} vs {want}", r.root);
    // r I_1(r) = I_0(r)
    let i0 = oracle::i_series(0.0, r.root);
    let i1 = oracle::i_series(1.0, r.root);
    assert!((r.root * i1 - i0).abs() <= 1e-12 * i0);
    assert!(r.residual <= 1e-12);

    let spec = ProblemSpec::robin(3, "-4.25").unwrap();
    for m in 0..=3u32 {
        let got = negative_robin_root(&spec, m).unwrap().unwrap().root;
        // a = m + sigma
        let want = oracle::negative_root(f64::from(m) + 0.5, f64::from(m) - 4.25).unwrap();
        assert!((got - want).abs() <= 1e-11 * want, "m={m}: {got} vs {want}");
    }
}

#[test]
fn negative_root_absent_cases() {
    let s = Solver::default();
    assert!(s.negative_robin_root(&ProblemSpec::robin(2, "0.3").unwrap(), 0).unwrap().is_none());
    let spec = ProblemSpec::robin(2, "-1").unwrap();
    assert!(s.negative_robin_root(&spec, 1).unwrap().is_none());
    assert_eq!(s.robin_root(&spec, 1, 1).unwrap().root, 0.0);
    assert!(s.robin_root(&spec, 1, 2).unwrap().root > 0.0);
}

#[test]
fn robin_requires_robin_spec() {
    let d = ProblemSpec::dirichlet(2).unwrap();
    assert!(matches!(Solver::default().robin_root(&d, 0, 1), Err(Error::InvalidSpec(_))));
    assert!(matches!(Solver::default().n_sigma(&d), Err(Error::InvalidSpec(_))));
}
