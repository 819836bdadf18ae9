use grothperm::exact::{upsilon_layered, LayeredTable};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

const LARGE_ROWS: &[(usize, &str, &str)] = &[
    (130, "1-3-5-8-13-21-32-47", "0.48255"),
    (140, "1-1-3-5-9-14-22-34-51", "0.48367"),
    (150, "1-1-3-6-10-15-24-36-54", "0.48465"),
    (160, "1-2-4-6-10-16-25-38-58", "0.48552"),
    (170, "1-2-4-7-11-17-27-41-60", "0.48631"),
    (180, "1-2-4-7-12-19-28-43-64", "0.48701"),
    (190, "1-2-5-8-12-20-30-45-67", "0.48763"),
    (200, "1-3-5-8-13-21-32-47-70", "0.48820"),
];

const ROWS: &[(usize, &str, &str)] = &[
    (2, "1-1", "0.00000"),
    (3, "1-2", "0.17611"),
    (4, "1-3", "0.21621"),
    (5, "1-1-3", "0.24599"),
    (6, "1-2-3", "0.28068"),
    (7, "1-2-4", "0.31068"),
    (8, "1-2-5", "0.32354"),
    (9, "1-3-5", "0.33953"),
    (10, "1-1-3-5", "0.34821"),
    (11, "1-1-3-6", "0.35956"),
    (12, "1-2-3-6", "0.36955"),
    (13, "1-2-4-6", "0.37800"),
    (14, "1-2-4-7", "0.38614"),
    (15, "1-2-4-8", "0.39085"),
    (16, "1-2-5-8", "0.39618"),
    (17, "1-3-5-8", "0.40138"),
    (18, "1-3-5-9", "0.40550"),
    (19, "1-1-3-5-9", "0.40887"),
    (20, "1-1-3-6-9", "0.41252"),
    (21, "1-1-3-6-10", "0.41605"),
    (22, "1-2-3-6-10", "0.41946"),
    (23, "1-2-4-6-10", "0.42223"),
    (24, "1-2-4-6-11", "0.42517"),
    (25, "1-2-4-7-11", "0.42797"),
    (26, "1-2-4-7-12", "0.43021"),
    (27, "1-2-4-8-12", "0.43206"),
    (28, "1-2-5-8-12", "0.43392"),
    (29, "1-2-5-8-13", "0.43590"),
    (30, "1-3-5-8-13", "0.43780"),
    (40, "1-2-4-6-10-17", "0.45099"),
    (50, "1-3-5-8-13-20", "0.45956"),
    (60, "1-1-3-6-10-15-24", "0.46537"),
    (70, "1-2-4-7-11-18-27", "0.46983"),
    (80, "1-2-5-8-13-20-31", "0.47312"),
    (90, "1-1-3-5-9-14-23-34", "0.47573"),
    (100, "1-2-3-6-10-16-25-37", "0.47792"),
    (110, "1-2-4-7-11-17-27-41", "0.47975"),
    (120, "1-2-4-8-12-19-30-44", "0.48125"),
];

fn within_ulp(got: f64, want: &str) -> bool {
    let w: f64 = want.parse().unwrap();
    (got - w).abs() <= 1.5e-5
}

#[test]
fn reproduces_table() {
    let start = std::time::Instant::now();
    let table = LayeredTable::new(120).unwrap();
    let opt = table.optimize_all();
    eprintln!("layered table to 120 in {:?}", start.elapsed());
    for &(n, comp, f) in ROWS {
        let o = &opt[n - 1];
        assert_eq!(o.composition.to_string(), comp, "n={n}");
        assert!(within_ulp(o.f, f), "n={n}: {} vs {f}", o.f);
    }
}

#[test]
fn winner_recomputed_exactly() {
    let table = LayeredTable::new(40).unwrap();
    for o in table.optimize_all().iter().skip(1).step_by(7) {
        let u = upsilon_layered(&o.composition, &BigRational::one());
        assert_eq!(u, BigRational::from_integer(o.upsilon.clone()));
    }
}

#[test]
fn monotone_below_half() {
    let opt = LayeredTable::new(150).unwrap().optimize_all();
    for w in opt[1..].windows(2) {
        assert!(w[1].f > w[0].f && w[1].f < 0.5);
    }
    assert!(opt[149].f >= 0.484);
    assert_eq!(opt[0].upsilon, BigInt::one());
}

#[test]
fn reproduces_large_rows() {
    let opt = LayeredTable::new(200).unwrap().optimize_all();
    for &(n, comp, f) in LARGE_ROWS {
        let o = &opt[n - 1];
        assert_eq!(o.composition.to_string(), comp, "n={n}");
        assert!(within_ulp(o.f, f), "n={n}: {} vs {f}", o.f);
    }
    assert!(LayeredTable::new(201).is_err());
}
