use grothperm::bpd::{enumerate_bpd, DOUBLE_CROSSING_EXAMPLE, two_asm_law, upsilon_via_bpd, BumplessPipeDream, Tile};
use grothperm::exact::asm_count;
use grothperm::pipedream::{exact_distribution, upsilon_bruteforce};
use grothperm::Permutation;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn counts_match_product_formula() {
    for n in 1..=5 {
        assert_eq!(BigInt::from(enumerate_bpd(n).unwrap().len()), asm_count(n));
    }
}

#[test]
fn extraction_routes_agree() {
    for n in 1..=5 {
        for d in enumerate_bpd(n).unwrap() {
            assert_eq!(d.permutation(), d.permutation_traced(), "\n{d}");
            if d.is_reduced() {
                let plain = d.crossing_counts();
                assert!(plain.iter().flatten().all(|&c| c <= 1));
            }
        }
    }
}

#[test]
fn two_asm_law_is_half_pipe_dream_law() {
    for n in 1..=5 {
        let a = two_asm_law(n).unwrap();
        let b = exact_distribution(n, &r(1, 2)).unwrap();
        assert_eq!(a, b, "n={n}");
        assert_eq!(a.values().fold(BigRational::zero(), |s, v| s + v), BigRational::one());
    }
}

#[test]
fn partition_function_at_one() {
    for n in 1..=5 {
        let total: BigInt = enumerate_bpd(n).unwrap().iter().map(|d| BigInt::one() << d.count(Tile::NwBump)).sum();
        assert_eq!(total, BigInt::one() << (n * (n - 1) / 2));
    }
}

#[test]
fn weigandt_matches_pipe_dreams() {
    for n in 1..=4 {
        let perms: Vec<Permutation> = two_asm_law(n).unwrap().into_keys().collect();
        assert_eq!(perms.len(), (1..=n).product::<usize>());
        for w in &perms {
            for beta in [r(0, 1), r(1, 1), r(2, 1)] {
                assert_eq!(upsilon_via_bpd(w, &beta).unwrap(), upsilon_bruteforce(w, &beta).unwrap(), "w={w} β={beta}");
            }
        }
    }
}

#[test]
fn rothe_is_reduced_dream_of_w() {
    let w: Permutation = "45128637".parse().unwrap();
    let d = BumplessPipeDream::rothe(&w);
    assert!(d.is_reduced());
    assert_eq!(d.permutation(), w);
    assert_eq!(d.permutation_traced(), w);
}

#[test]
fn double_crossing_example() {
    let d: BumplessPipeDream = DOUBLE_CROSSING_EXAMPLE.parse().unwrap();
    let w: Permutation = "45128637".parse().unwrap();
    assert!(!d.is_reduced());
    let c = d.crossing_counts();
    for a in 1..=8 {
        for b in a + 1..=8 {
            assert_eq!(c[a][b] >= 2, (a, b) == (2, 5), "pair ({a},{b})");
        }
    }
    assert_eq!(c[2][5], 2);
    assert_eq!(d.permutation(), w);
    assert_eq!(d.permutation_traced(), w);
    assert_eq!(d.to_string(), DOUBLE_CROSSING_EXAMPLE);
}
