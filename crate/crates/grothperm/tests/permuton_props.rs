use grothperm::mc;
use grothperm::permuton::{
    atom_mass, conditional_cdf, copula, ellipse_residual, ellipse_x, fluct_report, gamma_p, limit_height, near_ellipse_fraction,
    standardized_heights, zone,
    EmpiricalGrid, Zone,
};
use grothperm::pipedream::sample_permutation;
use proptest::prelude::*;

fn h(x: f64, y: f64, p: f64) -> f64 {
    limit_height(x, y, p).unwrap()
}

#[test]
fn continuous_across_boundaries() {
    let eps = 1e-12;
    for p in [0.2, 0.5, 0.8] {
        let q = 1.0 - p;
        for k in 1..1000 {
            let s = k as f64 / 1000.0;
            // Upper line y = x / q for x < q, lower line y = q x.
            for (x, y) in [(s * q, s), (s, q * s)] {
                for (dx, dy) in [(eps, 0.0), (-eps, 0.0), (0.0, eps), (0.0, -eps)] {
                    let (a, b) = ((x + dx).clamp(0.0, 1.0), (y + dy).clamp(0.0, 1.0));
                    assert!((h(a, b, p) - h(x, y, p)).abs() < 1e-10, "p={p} at ({x},{y})");
                }
            }
            // The ellipse arc x = x_p(y) for y > 1 - p.
            let y = q + s * p;
            let x = ellipse_x(y, p).unwrap();
            if x <= 1.0 {
                assert!(ellipse_residual(x, y, p).abs() < 1e-9);
                assert!(h(x, y, p).abs() < 1e-10);
                assert!(h((x - eps).max(0.0), y, p).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn monotone_and_lipschitz() {
    let g = 200;
    for p in [0.3, 0.5, 0.8] {
        let v: Vec<Vec<f64>> = (0..=g).map(|i| (0..=g).map(|j| h(i as f64 / g as f64, j as f64 / g as f64, p)).collect()).collect();
        for i in 0..=g {
            for j in 0..=g {
                if i < g {
                    let d = v[i][j] - v[i + 1][j];
                    assert!(d >= -1e-12 && d <= 1.0 / g as f64 + 1e-12, "x step p={p} ({i},{j})");
                }
                if j < g {
                    let d = v[i][j] - v[i][j + 1];
                    assert!(d >= -1e-12 && d <= 1.0 / g as f64 + 1e-12, "y step p={p} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn marginals_and_atoms() {
    for p in [0.3, 0.5, 0.8] {
        for k in 1..50 {
            let s = k as f64 / 50.0;
            assert!((copula(s, 1.0, p).unwrap() - s).abs() < 1e-12);
            assert!((copula(1.0, s, p).unwrap() - s).abs() < 1e-12);
            assert!((h(s, 0.0, p) - (1.0 - s)).abs() < 1e-12);
            let y = 1.0 - p + s * p;
            let x = ellipse_x(y, p).unwrap();
            if x < 1.0 - 1e-9 {
                let below = conditional_cdf((x - 1e-9).max(0.0), y, p).unwrap();
                let jump = 1.0 - below;
                assert!((jump - atom_mass(y, p).unwrap()).abs() < 1e-6, "p={p} y={y}");
            }
        }
    }
}

#[test]
fn zones_exist() {
    assert_eq!(zone(0.1, 0.9, 0.5).unwrap(), Zone::A);
    assert_eq!(zone(0.9, 0.1, 0.5).unwrap(), Zone::B);
    assert_eq!(zone(0.5, 0.5, 0.5).unwrap(), Zone::C);
    assert_eq!(zone(0.95, 0.95, 0.5).unwrap(), Zone::D);
    assert!(zone(1.5, 0.5, 0.5).is_err());
    assert!((gamma_p(0.5) - (1.0 - std::f64::consts::PI / 4.0)).abs() < 1e-12);
}

#[test]
fn inversion_constant_and_singular_mass() {
    let n = 2000usize;
    let pairs = (n * (n - 1) / 2) as f64;
    let nf = n as f64;
    // Points on the singular part wander on the n^{-2/3} scale.
    let wide = 2.0 * nf.powf(-2.0 / 3.0);
    for p in [0.3, 0.5, 0.8] {
        let rows = mc::run(40, 100, |_, rng| {
            let w = sample_permutation(n, p, rng)?;
            Ok((w.inversions() as f64 / pairs, near_ellipse_fraction(&w, p, 3.0 / nf), near_ellipse_fraction(&w, p, wide)))
        })
        .unwrap();
        let mean = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
        let (inv, narrow, near) = (mean(|r| r.0), mean(|r| r.1), mean(|r| r.2));
        eprintln!(
            "p={p}: inv/C(n,2) = {inv:.4}, within 3/n = {narrow:.4}, within 2n^(-2/3) = {near:.4}, gamma = {:.4}",
            gamma_p(p)
        );
        assert!((inv - gamma_p(p)).abs() < 0.01, "p={p}: {inv}");
        assert!((near - gamma_p(p)).abs() < 0.03, "p={p}: {near}");
    }
}

#[test]
fn grid_merge_is_associative() {
    let n = 300;
    let ws: Vec<_> = mc::run(1, 6, |_, rng| sample_permutation(n, 0.5, rng)).unwrap();
    let mut all = EmpiricalGrid::new(10, n);
    for w in &ws {
        all.add(w).unwrap();
    }
    let mut a = EmpiricalGrid::new(10, n);
    let mut b = EmpiricalGrid::new(10, n);
    for w in &ws[..2] {
        a.add(w).unwrap();
    }
    for w in &ws[2..] {
        b.add(w).unwrap();
    }
    a.merge(b).unwrap();
    assert_eq!(a, all);
    assert!(all.merge(EmpiricalGrid::new(11, n)).is_err());
}

proptest! {
    #[test]
    fn copula_is_two_increasing(x in 0.0f64..0.95, y in 0.0f64..0.95, dx in 0.001f64..0.05, dy in 0.001f64..0.05, p in 0.05f64..0.95) {
        let c = |a: f64, b: f64| copula(a.min(1.0), b.min(1.0), p).unwrap();
        let vol = c(x + dx, y + dy) - c(x, y + dy) - c(x + dx, y) + c(x, y);
        prop_assert!(vol >= -1e-9);
    }

    #[test]
    fn height_copula_relation(x in 0.0f64..1.0, y in 0.0f64..1.0, p in 0.05f64..0.95) {
        let lhs = h(x, y, p);
        let rhs = 1.0 - x - y + copula(x, y, p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn height_fluctuations_approach_tracy_widom() {
    let small = fluct_report(&standardized_heights(250, 0.5, 0.5, 0.5, 500, 5).unwrap()).unwrap();
    let large = fluct_report(&standardized_heights(1000, 0.5, 0.5, 0.5, 500, 5).unwrap()).unwrap();
    eprintln!("n=250: {small:?}\nn=1000: {large:?}");
    assert!((large.mean - large.tw_mean).abs() < (small.mean - small.tw_mean).abs());
    assert!((large.sd - large.tw_sd).abs() < 0.15);
    assert!(large.ks < small.ks);
}
