use grothperm::exact::{
    catalan_hankel, compositions, hankel_det, hankel_det_elimination, narayana_poly, proctor, upsilon_layered, upsilon_w0,
    upsilon_w0_large_schroder, upsilon_w0_schroder, w0_kn,
};
use grothperm::pipedream::upsilon_table;
use num_rational::BigRational;
use proptest::prelude::*;

fn ri(a: i64) -> BigRational {
    BigRational::from_integer(a.into())
}

#[test]
fn proctor_equals_catalan_hankel() {
    for k in 0..=10 {
        for n in 0..=10 {
            assert_eq!(proctor(k, n), BigRational::from_integer(catalan_hankel(k, n)), "k={k} n={n}");
        }
    }
}

#[test]
fn schroder_routes_agree_at_one() {
    for k in 0..=10 {
        for n in 0..=10 {
            let nar = upsilon_w0(k, n, &ri(1));
            assert_eq!(upsilon_w0_schroder(k, n), nar, "k={k} n={n}");
            if n > 0 {
                assert_eq!(upsilon_w0_large_schroder(k, n), nar, "k={k} n={n}");
            }
        }
    }
}

#[test]
fn determinants_match_brute_force() {
    for m in 1..=6 {
        for beta in [ri(0), ri(1), ri(2)] {
            let table = upsilon_table(m, &beta).unwrap();
            for b in compositions(m) {
                assert_eq!(upsilon_layered(&b, &beta), table[&b.layered()], "b={b} beta={beta}");
            }
            for n in 1..=m {
                let k = m - n;
                let w = w0_kn(k, n).unwrap();
                assert_eq!(upsilon_w0(k, n, &beta), table[&w], "w0({k};{n}) beta={beta}");
                if beta == ri(1) {
                    assert_eq!(upsilon_w0_schroder(k, n), table[&w]);
                    assert_eq!(upsilon_w0_large_schroder(k, n), table[&w]);
                }
            }
        }
    }
}

#[test]
fn compositions_are_complete() {
    assert!(compositions(0).is_empty());
    let c: Vec<String> = compositions(3).iter().map(|b| b.to_string()).collect();
    assert_eq!(c, ["3", "1-2", "2-1", "1-1-1"]);
    assert_eq!(compositions(7).len(), 64);
    assert_eq!(w0_kn(2, 3).unwrap().to_string(), "12543");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn condensation_matches_elimination(n in 0usize..12, k in 0usize..8, a in -4i64..5, b in 1i64..4) {
        let beta = BigRational::new(a.into(), b.into());
        prop_assert_eq!(hankel_det(&beta, n, k), hankel_det_elimination(&beta, n, k));
    }

    #[test]
    fn narayana_at_one_is_catalan(n in 0usize..40) {
        prop_assert_eq!(narayana_poly(n, &ri(1)), BigRational::from_integer(grothperm::exact::catalan(n)));
    }
}
