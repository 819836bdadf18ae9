use grothperm::pipedream::{
    enumerate, exact_distribution, num_boxes, sample_permutation, upsilon_bruteforce, upsilon_table, PipeDream,
};
use grothperm::rng::stream;
use grothperm::Permutation;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn dream(max_n: usize) -> impl Strategy<Value = PipeDream> {
    (2..=max_n).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), num_boxes(n)).prop_map(move |bits| {
        let mut d = PipeDream::new(n);
        let mut k = 0;
        for (i, j) in PipeDream::column_order(n) {
            d.set(i, j, bits[k]);
            k += 1;
        }
        d
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn reduction_is_reduced_and_idempotent(d in dream(8)) {
        let (red, trace) = d.reduce();
        prop_assert!(red.is_reduced());
        prop_assert!(red.crossing_counts().iter().all(|&c| c <= 1));
        prop_assert_eq!(red.cross_count() + trace.demotions(), d.cross_count());
        prop_assert_eq!(red.cross_count() as u64, red.permutation().inversions());
        prop_assert_eq!(red.reduce().0, red.clone());
        prop_assert_eq!(red.permutation(), d.permutation());
    }

    #[test]
    fn q_zero_is_reduction(d in dream(8), seed in any::<u64>()) {
        prop_assert_eq!(d.q_reduce(0.0, &mut stream(seed, 0)).unwrap(), d.permutation());
        prop_assert_eq!(d.q_reduce(1.0, &mut stream(seed, 0)).unwrap(), d.trace());
    }

    #[test]
    fn text_round_trip(d in dream(9)) {
        prop_assert_eq!(d.to_string().parse::<PipeDream>().unwrap(), d);
    }
}

#[test]
fn extraction_routes_exhaustive() {
    for n in 1..=6 {
        for d in enumerate(n).unwrap() {
            let w = d.permutation();
            assert_eq!(w, d.permutation_via_demazure());
            assert_eq!(w, d.reduce().0.trace());
        }
    }
}

#[test]
fn extraction_routes_random_order_30() {
    for s in 0..10_000 {
        let d = PipeDream::sample(30, 0.5, &mut stream(11, s)).unwrap();
        assert_eq!(d.permutation(), d.permutation_via_demazure());
    }
}

#[test]
fn partition_function() {
    for n in 2..=6 {
        let total = upsilon_table(n, &BigRational::one()).unwrap().values().fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(total, BigRational::from_integer(BigInt::one() << (n * (n - 1) / 2)));
    }
}

#[test]
fn distribution_is_normalized_grothendieck_weight() {
    for n in 2..=6 {
        for p in [r(1, 4), r(1, 2), r(3, 4)] {
            let x = &p / (BigRational::one() - &p);
            let ups = upsilon_table(n, &x).unwrap();
            let law = exact_distribution(n, &p).unwrap();
            let scale = num_traits::pow(BigRational::one() - &p, n * (n - 1) / 2);
            assert_eq!(law.values().fold(BigRational::zero(), |a, b| a + b), BigRational::one());
            for (w, m) in &law {
                let expected = &scale * num_traits::pow(x.clone(), w.inversions() as usize) * &ups[w];
                assert_eq!(*m, expected, "n={n} p={p} w={w}");
            }
        }
    }
}

#[test]
fn small_examples() {
    let w132: Permutation = "132".parse().unwrap();
    assert_eq!(upsilon_bruteforce(&w132, &BigRational::one()).unwrap(), r(3, 1));
    assert_eq!(upsilon_bruteforce(&Permutation::identity(4), &r(7, 3)).unwrap(), r(1, 1));
    let law = exact_distribution(3, &r(1, 2)).unwrap();
    assert_eq!(law[&w132], r(3, 8));
    let law2 = exact_distribution(2, &r(2, 7)).unwrap();
    assert_eq!(law2[&"21".parse::<Permutation>().unwrap()], r(2, 7));
    assert_eq!(law2[&Permutation::identity(2)], r(5, 7));
    assert_eq!(enumerate(3).unwrap().count(), 8);
    assert_eq!(enumerate(6).unwrap().count(), 32768);
    assert!(enumerate(8).is_err());
}

#[test]
fn extreme_probabilities() {
    let mut rng = stream(3, 3);
    assert!(sample_permutation(40, 0.0, &mut rng).unwrap().is_identity());
    assert_eq!(sample_permutation(40, 1.0, &mut rng).unwrap(), Permutation::longest(40));
    assert!(PipeDream::sample(5, 1.5, &mut rng).is_err());
}
