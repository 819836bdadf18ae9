//! Oracle checks shared by `validate` and the acceptance harness.

use std::collections::BTreeMap;
use std::time::Instant;

use grothperm::bpd::{clt_experiment, enumerate_bpd, two_asm_law, BumplessPipeDream, DOUBLE_CROSSING_EXAMPLE};
use grothperm::exact::{
    asm_count, catalan_hankel, compositions, proctor, upsilon_layered, upsilon_w0, upsilon_w0_large_schroder,
    upsilon_w0_schroder, w0_kn, LayeredTable,
};
use grothperm::nonreduced::{exit_law, inversion_scaling_experiment, kappa, kappa_bounds};
use grothperm::permuton::{fluct_constant, fluct_report, gamma_p, limit_height, standardized_heights, EmpiricalGrid};
use grothperm::pipedream::{exact_distribution, sample_permutation, sample_traced, upsilon_table, PipeDream, WORKED_EXAMPLE};
use grothperm::rng::{stream, Geometric};
use grothperm::stats::{chi_square, chi_square_homogeneity, total_variation};
use grothperm::tasep::{
    displacement_law, exact_height_law, height_via_tasep, schur_marginal_lastpart, trajectory, SchurSpec,
};
use grothperm::vertex::{exact_law, sample_colored};
use grothperm::{mc, HeckeWord, Permutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Seed whose stream 0 draws the k = 3, n = 6 trajectory with exits (2, 3, 5).
pub const EXIT_EXAMPLE_SEED: u64 = 2609;

/// Reference rows `(n, composition, f)` of the layered optimum.
pub const LAYERED_ROWS: &[(usize, &str, &str)] = &[
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

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn from(name: &'static str, r: grothperm::Result<(bool, String)>) -> Check {
        match r {
            Ok((pass, detail)) => Check { name, pass, detail },
            Err(e) => Check { name, pass: false, detail: format!("error: {e}") },
        }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// `Σ_w Υ_w(1) = 2^{C(n,2)}` by enumeration.
pub fn partition_function(max_n: usize) -> Check {
    Check::from("partition function", (|| {
        let start = Instant::now();
        let mut ok = true;
        for n in 2..=max_n {
            let total = upsilon_table(n, &BigRational::one())?.into_values().fold(BigRational::zero(), |a, b| a + b);
            ok &= total == BigRational::from_integer(BigInt::one() << (n * (n - 1) / 2));
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((ok && secs < 10.0, format!("n = 2..={max_n} exact, {secs:.2} s")))
    })())
}

/// The fixed examples: reduction, 0-Hecke word, bumpless dream, TASEP run.
pub fn worked_examples() -> Check {
    Check::from("worked examples", (|| {
        let p = |s: &str| s.parse::<Permutation>();
        let d: PipeDream = WORKED_EXAMPLE.parse()?;
        let mut bad = Vec::new();
        if d.permutation() != p("241653")? || d.reduce().0.trace() != p("241653")? {
            bad.push("reduction");
        }
        if d.trace() != p("241635")? || d.q_reduce(1.0, &mut stream(0, 0))? != p("241635")? {
            bad.push("q = 1 trace");
        }
        if HeckeWord::new(vec![5, 5, 3, 4, 1, 2, 4, 5, 4], 6)?.demazure_product() != p("316254")? {
            bad.push("Demazure product");
        }
        let b: BumplessPipeDream = DOUBLE_CROSSING_EXAMPLE.parse()?;
        let c = b.crossing_counts();
        let only_2_5 = (1..=8).all(|a| (a + 1..=8).all(|z| (c[a][z] >= 2) == ((a, z) == (2, 5)))) && c[2][5] == 2;
        if b.permutation() != p("45128637")? || b.permutation_traced() != p("45128637")? || !only_2_5 {
            bad.push("bumpless dream");
        }
        let (path, rec) = trajectory(3, 6, 0.5, &mut stream(EXIT_EXAMPLE_SEED, 0))?;
        let drawn: Vec<Vec<i64>> = vec![vec![3, 2, 1], vec![5, 2, 1], vec![5, 3, 1], vec![5, 4, 2], vec![5, 4, 2], vec![5, 4, 2]];
        if path != drawn || rec.exit_times != [2, 3, 5] {
            bad.push("TASEP exits");
        }
        let detail = if bad.is_empty() {
            "241653, 241635, 316254, 45128637, exits (2,3,5) with seed 2609".to_string()
        } else {
            format!("mismatch in {}", bad.join(", "))
        };
        Ok((bad.is_empty(), detail))
    })())
}

fn height_counts(hs: impl Iterator<Item = usize>, top: usize) -> Vec<u64> {
    let mut c = vec![0u64; top + 1];
    for h in hs {
        c[h] += 1;
    }
    c
}

/// Pipe-dream reduction, colored sweep and TASEP give the same law: exactly
/// up to `exact_max`, and by chi-square at order `n`.
pub fn sampler_agreement(exact_max: usize, n: usize, samples: u64, seed: u64) -> Check {
    Check::from("three-sampler agreement", (|| {
        let mut ok = true;
        for m in 1..=exact_max {
            for p in [BigRational::new(1.into(), 4.into()), half(), BigRational::new(3.into(), 4.into())] {
                let law = exact_distribution(m, &p)?;
                ok &= exact_law(m, &p)? == law;
                for x in 1..=m {
                    for y in 1..=m {
                        let mut expected = vec![BigRational::zero(); m - x + 2];
                        for (w, pr) in &law {
                            expected[w.height(x, y)?] += pr;
                        }
                        ok &= exact_height_law(m, x, y, &p)? == expected;
                    }
                }
            }
        }
        let p = 0.5;
        let geo = Geometric::new(p)?;
        let pipe = mc::run(seed, samples, |_, rng| sample_permutation(n, p, rng))?;
        let vertex = mc::run(seed + 1, samples, |_, rng| sample_colored(n, p, rng))?;
        let points = [(n / 2, n / 2), (2 * n / 5, 7 * n / 10), (7 * n / 10, 2 * n / 5)];
        let mut worst: f64 = 1.0;
        for (k, &(x, y)) in points.iter().enumerate() {
            let top = n - x + 1;
            let a = height_counts(pipe.iter().map(|w| w.height(x, y).unwrap()), top);
            let b = height_counts(vertex.iter().map(|w| w.height(x, y).unwrap()), top);
            let t = height_counts(mc::run(seed + 2 + k as u64, samples, |_, rng| height_via_tasep(n, x, y, &geo, rng))?.into_iter(), top);
            for r in [chi_square_homogeneity(&a, &b)?, chi_square_homogeneity(&a, &t)?] {
                ok &= r.passes(0.01);
                worst = worst.min(r.p_value);
            }
        }
        Ok((ok, format!("exact for n <= {exact_max}; n = {n}, {samples} samples, smallest p-value {worst:.3}")))
    })())
}

fn within_rounding(got: f64, want: &str) -> bool {
    want.parse::<f64>().map(|w| (got - w).abs() <= 1.5e-5).unwrap_or(false)
}

/// Layered optimum against the reference rows up to `max_n`.
pub fn layered_table(max_n: usize) -> Check {
    Check::from("layered table", (|| {
        let start = Instant::now();
        let opt = LayeredTable::new(max_n)?.optimize_all();
        let mut wrong = Vec::new();
        for &(n, comp, f) in LAYERED_ROWS.iter().filter(|r| r.0 <= max_n) {
            let o = &opt[n - 1];
            if o.composition.to_string() != comp || !within_rounding(o.f, f) {
                wrong.push(o.csv_row());
            }
        }
        let secs = start.elapsed().as_secs_f64();
        let detail = if wrong.is_empty() {
            format!("all rows n <= {max_n} match, {secs:.1} s")
        } else {
            format!("wrong rows: {}", wrong.join("; "))
        };
        Ok((wrong.is_empty() && secs < 600.0, detail))
    })())
}

/// Proctor = Catalan Hankel, Schröder = Narayana at β = 1, and all of them
/// equal enumeration for `w0(k; n)` and layered permutations.
pub fn determinant_identities(max_kn: usize, max_order: usize) -> Check {
    Check::from("determinant identities", (|| {
        let mut ok = true;
        let ri = |a: i64| BigRational::from_integer(a.into());
        for k in 0..=max_kn {
            for n in 0..=max_kn {
                ok &= proctor(k, n) == BigRational::from_integer(catalan_hankel(k, n));
                ok &= upsilon_w0_schroder(k, n) == upsilon_w0(k, n, &ri(1));
            }
        }
        let mut checked = 0;
        for m in 1..=max_order {
            for beta in [ri(0), ri(1), ri(2)] {
                let table = upsilon_table(m, &beta)?;
                for b in compositions(m) {
                    ok &= upsilon_layered(&b, &beta) == table[&b.layered()];
                    checked += 1;
                }
                for n in 1..=m {
                    let w = w0_kn(m - n, n)?;
                    ok &= upsilon_w0(m - n, n, &beta) == table[&w];
                    if beta == ri(1) {
                        ok &= upsilon_w0_schroder(m - n, n) == table[&w] && upsilon_w0_large_schroder(m - n, n) == table[&w];
                    }
                    checked += 1;
                }
            }
        }
        Ok((ok, format!("k, n <= {max_kn}; {checked} brute-force comparisons up to order {max_order}")))
    })())
}

/// Height surface and inversion density at order `n`, `p = 1/2`.
pub fn permuton_lln(n: usize, samples: u64, seed: u64) -> Check {
    Check::from("permuton law of large numbers", (|| {
        let p = 0.5;
        let g = 10;
        let pairs = (n * (n - 1) / 2) as f64;
        let (grid, inv) = mc::fold(
            seed,
            samples,
            || (EmpiricalGrid::new(g, n), 0.0f64),
            |acc, _, rng| {
                let w = sample_permutation(n, p, rng)?;
                acc.1 += w.inversions() as f64 / pairs;
                acc.0.add(&w)
            },
            |a, b| {
                a.0.merge(b.0).expect("grids share a shape");
                a.1 += b.1;
            },
        )?;
        let dev = grid.compare_to_limit(p)?;
        let inv = inv / samples as f64;
        let ok = dev.max_abs < 0.02 && (inv - gamma_p(p)).abs() < 0.01;
        Ok((ok, format!("max |H/n - h°| = {:.4}, inv/C(n,2) = {inv:.4} vs γ = {:.4}", dev.max_abs, gamma_p(p))))
    })())
}

/// Tracy–Widom moments of standardized heights at `(1/2, 1/2)`, `p = 1/2`.
pub fn tracy_widom(n: usize, samples: u64, seed: u64) -> Check {
    Check::from("Tracy-Widom fluctuations", (|| {
        let xs = standardized_heights(n, 0.5, 0.5, 0.5, samples, seed)?;
        let r = fluct_report(&xs)?;
        let dm = (r.mean - r.tw_mean).abs();
        let ds = (r.sd - r.tw_sd).abs();
        let small = fluct_report(&standardized_heights(n / 4, 0.5, 0.5, 0.5, samples, seed)?)?;
        let ok = dm < 0.2 && ds < 0.15;
        Ok((
            ok,
            format!(
                "mean {:.3} vs {:.3} (|diff| {dm:.3}, {}), sd {:.3} vs {:.3} (|diff| {ds:.3}, {}), KS {:.3} at n={} -> {:.3} at n={n}",
                r.mean,
                r.tw_mean,
                if dm < 0.2 { "ok" } else { "over 0.2" },
                r.sd,
                r.tw_sd,
                if ds < 0.15 { "ok" } else { "over 0.15" },
                small.ks,
                n / 4,
                r.ks
            ),
        ))
    })())
}

/// Mean standardized height at `(⌊nx⌋ + 1, ⌊ny⌋ + 1)`, the lattice point one
/// step inside the quadrant. Reported only.
pub fn shifted_lattice_mean(n: usize, samples: u64, seed: u64) -> grothperm::Result<f64> {
    let (x, y, p) = (0.5, 0.5, 0.5);
    let geo = Geometric::new(p)?;
    let nf = n as f64;
    let h = limit_height(x, y, p)?;
    let scale = fluct_constant(x, y, p)? * nf.cbrt();
    let xi = (nf * x) as usize + 1;
    let yi = (nf * y) as usize + 1;
    let xs = mc::run(seed, samples, |_, rng| Ok((height_via_tasep(n, xi, yi, &geo, rng)? as f64 - nf * h) / scale))?;
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Exit law against tracing at order 6, and inversion scaling at order `n`.
pub fn nonreduced(law_samples: u64, n: usize, samples: u64, seed: u64) -> Check {
    Check::from("non-reduced model", (|| {
        let m = 6;
        let ws = mc::run(seed, law_samples, |_, rng| sample_traced(m, 0.5, rng))?;
        let mut ok = true;
        let mut worst: f64 = 1.0;
        for i in 1..=m {
            let mut counts = vec![0u64; m];
            for w in &ws {
                counts[w.inverse().get(i) - 1] += 1;
            }
            let t = chi_square(&counts, &exit_law(m, i, 0.5)?, 5.0)?;
            ok &= t.passes(0.01);
            worst = worst.min(t.p_value);
        }
        let rep = inversion_scaling_experiment(n, 0.5, samples, seed + 1)?;
        let (lo, hi) = kappa_bounds();
        let rel = (rep.inv_mean - kappa()).abs() / kappa();
        ok &= rep.inv_mean > lo && rep.inv_mean < hi && rel < 0.1;
        Ok((
            ok,
            format!(
                "order 6 chi-square smallest p-value {worst:.3}; inv/n^1.5 = {:.4} ± {:.4} in [{lo:.3}, {hi:.3}], {:.1}% from κ = {:.4}",
                rep.inv_mean,
                rep.inv_se,
                100.0 * rel,
                kappa()
            ),
        ))
    })())
}

/// Bumpless counts, 2-ASM law, and the central limit for `w(n)` with KS
/// distance below `ks_max`.
pub fn bpd(max_n: usize, clt_n: usize, clt_samples: u64, ks_max: f64, seed: u64) -> Check {
    Check::from("bumpless dreams and ASMs", (|| {
        let mut ok = true;
        let mut counts = Vec::new();
        for n in 1..=max_n {
            let c = enumerate_bpd(n)?.len();
            ok &= BigInt::from(c) == asm_count(n);
            ok &= two_asm_law(n)? == exact_distribution(n, &half())?;
            counts.push(c.to_string());
        }
        let clt = clt_experiment(clt_n, clt_samples, seed)?;
        ok &= clt.ks.statistic < ks_max;
        Ok((
            ok,
            format!("counts {}, 2-ASM law = p=1/2 law for n <= {max_n}, CLT KS {:.4} at n = {clt_n}", counts.join(","), clt.ks.statistic),
        ))
    })())
}

/// TASEP displacement against the Schur marginal.
pub fn schur(samples: u64) -> Check {
    Check::from("Schur measure", (|| {
        let mut worst: f64 = 0.0;
        for (m, t) in [(1, 2), (2, 3), (3, 3)] {
            for p in [0.25, 0.5] {
                let exact = schur_marginal_lastpart(&SchurSpec::new(m, t, p))?;
                let emp = displacement_law(m, t, p, samples, (m * 10 + t) as u64)?;
                let top = exact.keys().chain(emp.keys()).copied().max().unwrap_or(0);
                let get = |law: &BTreeMap<usize, f64>| (0..=top).map(|k| law.get(&k).copied().unwrap_or(0.0)).collect::<Vec<_>>();
                worst = worst.max(total_variation(&get(&exact), &get(&emp))?);
            }
        }
        Ok((worst < 0.01, format!("largest TV {worst:.5} over 6 cases, {samples} samples each")))
    })())
}

/// The same sampling call under thread budgets 1, 4 and 16.
pub fn determinism_in_process(seed: u64) -> Check {
    Check::from("determinism", (|| {
        let run = |threads| {
            mc::set_thread_budget(threads);
            mc::run(seed, 300, |_, rng| sample_permutation(40, 0.5, rng))
        };
        let a = run(1)?;
        let ok = run(4)? == a && run(16)? == a;
        mc::set_thread_budget(0);
        Ok((ok, "300 samples identical across 1, 4, 16 threads".into()))
    })())
}

/// Quick suite for `validate`; `full` uses the acceptance sizes.
pub fn suite(full: bool) -> Vec<Check> {
    if full {
        vec![
            partition_function(6),
            worked_examples(),
            sampler_agreement(4, 50, 100_000, 50),
            layered_table(120),
            determinant_identities(10, 6),
            permuton_lln(2000, 200, 60),
            tracy_widom(4000, 500, 70),
            nonreduced(1_000_000, 4000, 20, 80),
            bpd(5, 2000, 2000, 0.05, 90),
            schur(1_000_000),
            determinism_in_process(110),
        ]
    } else {
        vec![
            partition_function(5),
            worked_examples(),
            sampler_agreement(4, 20, 20_000, 50),
            layered_table(30),
            determinant_identities(6, 5),
            bpd(4, 400, 1000, 0.08, 90),
            schur(200_000),
            determinism_in_process(110),
        ]
    }
}
