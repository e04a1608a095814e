use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singular_sl::inverse::*;
use singular_sl::numerics::{inner, integrate, Grid, RealSeq};
use singular_sl::solutions::Potential;
use singular_sl::spectrum::{eigenvalues, spectral_map};

fn pot(grid: &Grid, f: impl Fn(f64) -> f64) -> Potential {
    Potential::from_fn(grid, f).unwrap()
}

fn bump(grid: &Grid) -> Potential {
    pot(grid, |x| 3.0 * (-30.0 * (x - 0.5) * (x - 0.5)).exp())
}

#[test]
fn forward_of_simple_potentials() {
    let grid = Grid::default_grid();
    let z = forward(0, &Potential::zero(&grid), 6).unwrap();
    assert_eq!(z.mean, 0.0);
    assert!(z.lambda_tilde.iter().all(|v| v.abs() < 1e-6));
    assert!(z.n_kappa.iter().all(|v| v == 0.0));
    let free = forward(2, &Potential::zero(&grid), 6).unwrap();
    let c = forward(2, &Potential::constant(&grid, -3.0), 6).unwrap();
    assert!((c.mean + 3.0).abs() < 1e-14);
    for n in 1..=6 {
        assert!((c.lambda_tilde.get(n) - free.lambda_tilde.get(n)).abs() < 1e-7);
        assert!(c.n_kappa.get(n).abs() < 1e-6);
    }
}

#[test]
fn differential_of_constant_direction() {
    let grid = Grid::default_grid();
    let q = pot(&grid, |x| (2.0 * PI * x).cos());
    for a in 0..=3 {
        let d = differential_apply(a, &q, &grid.constant(1.0), 6).unwrap();
        assert!((d.mean - 1.0).abs() < 1e-12);
        assert!(d.lambda_tilde.iter().all(|v| v.abs() < 1e-8));
        assert!(d.n_kappa.iter().all(|v| v.abs() < 1e-7), "{:?}", d.n_kappa);
    }
}

#[test]
fn differential_matches_finite_differences() {
    let grid = Grid::default_grid();
    let eps = 1e-4;
    let tol = 1e-4f64.max(1e2 * eps * eps);
    let q = pot(&grid, |x| 0.5 * (2.0 * PI * x).cos());
    let n = 5;
    for a in [0, 2] {
        let lin = linearize(a, &q, n).unwrap();
        for v in [
            grid.sample(|x| x * x - 0.3),
            grid.sample(|x| (5.0 * x).sin()),
        ] {
            let d = lin.apply(&v).unwrap().to_vec();
            let plus = forward(a, &q.perturbed(eps, &v).unwrap(), n)
                .unwrap()
                .coordinates();
            let minus = forward(a, &q.perturbed(-eps, &v).unwrap(), n)
                .unwrap()
                .coordinates();
            for k in 0..d.len() {
                let fd = (plus[k] - minus[k]) / (2.0 * eps);
                assert!((fd - d[k]).abs() < tol, "a={a} k={k}: {fd} vs {}", d[k]);
            }
        }
    }
}

#[test]
fn differential_is_linear() {
    let grid = Grid::default_grid();
    let lin = linearize(1, &bump(&grid), 5).unwrap();
    let f = grid.sample(|x| x.exp());
    let g = grid.sample(|x| (7.0 * x).cos());
    let lhs = lin
        .apply(&f.scale(2.0).axpy(-3.0, &g).unwrap())
        .unwrap()
        .to_vec();
    let (df, dg) = (
        lin.apply(&f).unwrap().to_vec(),
        lin.apply(&g).unwrap().to_vec(),
    );
    for k in 0..lhs.len() {
        assert!((lhs[k] - (2.0 * df[k] - 3.0 * dg[k])).abs() < 1e-12 * (1.0 + lhs[k].abs()));
    }
}

#[test]
fn inverse_differential_basic_values() {
    let grid = Grid::default_grid();
    let q = pot(&grid, |x| x);
    let lin = linearize(1, &q, 4).unwrap();
    let zero = RealSeq::zeros(4);
    let one = lin.inverse(1.0, &zero, &zero).unwrap();
    assert_eq!(one, grid.constant(1.0));
    let w2 = lin.inverse(0.0, &RealSeq::unit(4, 2), &zero).unwrap();
    assert_eq!(w2, lin.modes[1].w_field);
}

#[test]
fn inverse_differential_round_trip() {
    let grid = Grid::default_grid();
    let q = pot(&grid, |x| (2.0 * PI * x).cos());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for a in [1, 2] {
        let lin = linearize(a, &q, 8).unwrap();
        let eta0 = rng.gen_range(-1.0..1.0);
        let eta = RealSeq::from((0..8).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
        let xi = RealSeq::from((0..8).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
        let v = inverse_differential_apply(a, &q, eta0, &eta, &xi).unwrap();
        let back = lin.apply(&v).unwrap();
        assert!((back.mean - eta0).abs() < 2e-4);
        for n in 1..=8 {
            assert!((back.lambda_tilde.get(n) - eta.get(n)).abs() < 2e-4);
            assert!((back.n_kappa.get(n) - xi.get(n)).abs() < 2e-4);
        }
    }
}

#[test]
fn pairing_matrix_is_the_identity() {
    let grid = Grid::default_grid();
    let potentials = [
        pot(&grid, |x| (2.0 * PI * x).cos()),
        pot(&grid, |x| x * x - 1.0),
        bump(&grid),
    ];
    for q in &potentials {
        for a in 0..=3 {
            let m = linearize(a, q, 8).unwrap().pairing_matrix().unwrap();
            assert_eq!(m.len(), 17);
            for (i, row) in m.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert!((v - id).abs() < 2e-4, "a={a} ({i},{j}): {v}");
                }
            }
        }
    }
}

#[test]
fn recovers_a_cosine_potential() {
    let grid = Grid::default_grid();
    let qs = pot(&grid, |x| 0.5 * (2.0 * PI * x).cos());
    let target = forward(1, &qs, 12).unwrap();
    let report = recover(
        1,
        &target,
        &Potential::zero(&grid),
        RecoveryOptions::default(),
    )
    .unwrap();
    assert!(report.converged, "{:?}", report.data_residual_history);
    assert!(report.final_residual() < 1e-6);
    assert!(report.iterations <= 15);
    // Contraction once close: residual ratio below 0.5 after entering 0.1.
    for w in report.data_residual_history.windows(2) {
        if w[0] < 0.1 {
            assert!(w[1] < 0.5 * w[0], "{:?}", report.data_residual_history);
        }
    }
    // The potential itself is matched only up to the untruncated modes;
    // the error sits in a layer at x = 1 and shrinks as N grows.
    let err = |r: &RecoveryReport| (r.final_potential.samples() - qs.samples()).l2_norm();
    let e12 = err(&report);
    let target = forward(1, &qs, 24).unwrap();
    let finer = recover(
        1,
        &target,
        &Potential::zero(&grid),
        RecoveryOptions::default(),
    )
    .unwrap();
    assert!(finer.converged);
    assert!(
        err(&finer) < e12 && e12 < 0.2 * qs.samples().l2_norm(),
        "{e12} {}",
        err(&finer)
    );
}

#[test]
fn recovers_constants_quickly() {
    let grid = Grid::default_grid();
    for a in [0, 1, 3] {
        let target = forward(a, &Potential::constant(&grid, 4.5), 6).unwrap();
        let report = recover(
            a,
            &target,
            &Potential::zero(&grid),
            RecoveryOptions::default(),
        )
        .unwrap();
        assert!(
            report.converged && report.iterations <= 3,
            "a={a}: {report:?}"
        );
        let q = report.final_potential.samples();
        assert!(q.values().iter().all(|v| (v - 4.5).abs() < 1e-6));
    }
}

#[test]
fn recovery_in_the_regular_case() {
    let grid = Grid::default_grid();
    let qs = pot(&grid, |x| 0.5 * (2.0 * PI * x).cos());
    let target = forward(0, &qs, 10).unwrap();
    let report = recover(
        0,
        &target,
        &Potential::zero(&grid),
        RecoveryOptions::default(),
    )
    .unwrap();
    assert!(report.converged && report.iterations <= 15);
}

#[test]
fn recovered_potential_improves_with_more_modes() {
    let grid = Grid::default_grid();
    let qs = bump(&grid);
    let q0 = Potential::constant(&grid, qs.mean());
    let err = |n: usize| {
        let target = forward(1, &qs, n).unwrap();
        let r = recover(1, &target, &q0, RecoveryOptions::default()).unwrap();
        assert!(r.converged);
        (r.final_potential.samples() - qs.samples()).l2_norm()
    };
    let (e8, e16) = (err(8), err(16));
    assert!(e16 <= e8 + 1e-8, "{e8} {e16}");
}

#[test]
fn frozen_linearisation_also_converges() {
    let grid = Grid::default_grid();
    let qs = pot(&grid, |x| 0.3 * (PI * x).sin());
    let target = forward(1, &qs, 6).unwrap();
    let opts = RecoveryOptions {
        frozen: true,
        max_iter: 60,
        ..Default::default()
    };
    let report = recover(1, &target, &Potential::zero(&grid), opts).unwrap();
    assert!(report.converged, "{:?}", report.data_residual_history);
}

#[test]
fn unreachable_target_returns_a_report() {
    let grid = Grid::default_grid();
    let mut target = forward(1, &Potential::zero(&grid), 4).unwrap();
    // Eigenvalues out of order cannot come from any potential.
    target.lambda_tilde = RealSeq::from(vec![400.0, -400.0, 0.0, 0.0]);
    let opts = RecoveryOptions {
        max_iter: 8,
        ..Default::default()
    };
    let report = recover(1, &target, &Potential::zero(&grid), opts).unwrap();
    assert!(!report.converged);
    assert!(report.data_residual_history.iter().all(|r| r.is_finite()));
}

fn unit_xi(rng: &mut ChaCha8Rng, n: usize) -> RealSeq {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    RealSeq::from(v.iter().map(|x| x / norm).collect::<Vec<_>>())
}

#[test]
fn isospectral_tangent_preserves_the_spectrum() {
    let grid = Grid::default_grid();
    let q = pot(&grid, |x| (2.0 * PI * x).cos());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for a in [0, 1, 2] {
        let xi = unit_xi(&mut rng, 6);
        let h = iso_tangent(a, &q, &xi).unwrap();
        assert!(integrate(&h).abs() < 1e-7);
        let base = eigenvalues(a, &q, 6).unwrap();
        let shift = |eps: f64| -> f64 {
            let ev = eigenvalues(a, &q.perturbed(eps, &h).unwrap(), 6).unwrap();
            (1..=6)
                .map(|n| (ev.get(n) - base.get(n)).abs())
                .fold(0.0, f64::max)
        };
        // Second order: the change at eps is quadratic, so halving eps
        // divides it by about four, while a generic direction moves it linearly.
        let (d1, d2) = (shift(1e-3), shift(5e-4));
        assert!(d1 < 1e-4, "a={a}: {d1:e}");
        assert!(d1 / d2 > 3.0, "a={a}: {d1:e} {d2:e}");
        let normal = iso_normal(a, &q, 0.4, &unit_xi(&mut rng, 6)).unwrap();
        assert!(inner(&h, &normal).unwrap().abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn tangent_and_normal_are_orthogonal(a in 0u32..4, xi in prop::collection::vec(-1.0f64..1.0, 5), eta in prop::collection::vec(-1.0f64..1.0, 5), eta0 in -1.0f64..1.0) {
        let grid = Grid::default_grid();
        let q = pot(&grid, |x| x * (1.0 - x) * 4.0);
        let lin = linearize(a, &q, 5).unwrap();
        let t = lin.tangent(&RealSeq::from(xi)).unwrap();
        let n = lin.normal(eta0, &RealSeq::from(eta)).unwrap();
        prop_assert!(inner(&t, &n).unwrap().abs() < 1e-5);
        prop_assert!(integrate(&t).abs() < 1e-7);
    }

    #[test]
    fn constant_target_mean_is_exact_after_one_step(a in 0u32..3, c in -10.0f64..10.0) {
        let grid = Grid::default_grid();
        let target = spectral_map(a, &Potential::constant(&grid, c), 4).unwrap();
        let opts = RecoveryOptions { max_iter: 1, ..Default::default() };
        let r = recover(a, &target, &Potential::zero(&grid), opts).unwrap();
        prop_assert!((r.final_potential.mean() - c).abs() < 1e-9);
    }
}
