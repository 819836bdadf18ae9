use grothperm::mc;
use grothperm::pipedream::{exact_distribution, sample_permutation};
use grothperm::stats::chi_square_homogeneity;
use grothperm::vertex::{exact_law, sample_color_blind, sample_colored, sample_colored_traced, weight_exact};
use grothperm::tasep::exact_height_law;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

const N: usize = 50;
const SAMPLES: u64 = 100_000;

#[test]
fn weights_are_stochastic() {
    for p in [r(0, 1), r(1, 4), r(1, 2), r(5, 6), r(1, 1)] {
        for a in 0..5 {
            for b in 0..5 {
                let mut total = BigRational::zero();
                for c in 0..5 {
                    for d in 0..5 {
                        total += weight_exact(&p, a, b, c, d);
                    }
                }
                assert_eq!(total, BigRational::one(), "p={p} a={a} b={b}");
            }
        }
    }
}

#[test]
fn exact_laws_coincide() {
    for n in 1..=5 {
        for p in [r(1, 4), r(1, 2), r(2, 3)] {
            assert_eq!(exact_law(n, &p).unwrap(), exact_distribution(n, &p).unwrap(), "n={n} p={p}");
        }
    }
}

#[test]
fn traced_sweep_is_a_reduced_dream() {
    for s in 0..200 {
        let (w, d, recs) = sample_colored_traced(12, 0.6, &mut grothperm::rng::stream(5, s)).unwrap();
        assert!(d.is_reduced());
        assert_eq!(d.permutation(), w);
        assert!(recs.iter().all(|v| v.bottom != 0 && v.left != 0));
    }
}

fn histogram(values: &[usize], size: usize) -> Vec<u64> {
    let mut h = vec![0u64; size + 1];
    for &v in values {
        h[v] += 1;
    }
    h
}

#[test]
fn first_entry_marginals_agree() {
    let a = mc::run(1, SAMPLES, |_, rng| Ok(sample_colored(N, 0.5, rng)?.get(1))).unwrap();
    let b = mc::run(2, SAMPLES, |_, rng| Ok(sample_permutation(N, 0.5, rng)?.get(1))).unwrap();
    let t = chi_square_homogeneity(&histogram(&a, N), &histogram(&b, N)).unwrap();
    assert!(t.passes(0.01), "{t:?}");
}

#[test]
fn color_forgetting() {
    let (x, y) = (20, 30);
    let colored = mc::run(3, SAMPLES, |_, rng| sample_colored(N, 0.5, rng)?.height(x, y)).unwrap();
    let blind = mc::run(4, SAMPLES, |_, rng| Ok(sample_color_blind(N, 0.5, x, rng)?.iter().filter(|&&c| c >= y).count())).unwrap();
    let t = chi_square_homogeneity(&histogram(&colored, N), &histogram(&blind, N)).unwrap();
    assert!(t.passes(0.01), "{t:?}");
}

#[test]
fn height_symmetry() {
    let (x, y) = (15, 35);
    let a = mc::run(5, SAMPLES, |_, rng| sample_permutation(N, 0.5, rng)?.height(x, y)).unwrap();
    let b = mc::run(6, SAMPLES, |_, rng| sample_permutation(N, 0.5, rng)?.height(y, x)).unwrap();
    let t = chi_square_homogeneity(&histogram(&a, N), &histogram(&b, N)).unwrap();
    assert!(t.passes(0.01), "{t:?}");
}

#[test]
fn tasep_height_laws_match_exact_permutation_law() {
    for n in 1..=5usize {
        for p in [BigRational::new(1.into(), 4.into()), BigRational::new(1.into(), 2.into()), BigRational::new(3.into(), 4.into())] {
            let law = exact_distribution(n, &p).unwrap();
            for x in 1..=n {
                for y in 1..=n {
                    let mut expected = vec![BigRational::zero(); n - x + 2];
                    for (w, pr) in &law {
                        expected[w.height(x, y).unwrap()] += pr;
                    }
                    assert_eq!(exact_height_law(n, x, y, &p).unwrap(), expected, "n={n} x={x} y={y} p={p}");
                }
            }
        }
    }
    assert!(exact_height_law(3, 0, 1, &BigRational::one()).is_err());
}
