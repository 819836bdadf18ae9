//! The non-reduced (`q = 1`) model: every cross tile crosses.
//!
//! Pipe `i` then performs a random walk; its exit column has the law
//! `P(w^{-1}_i = j) = F1(i, j) + p^n 1[i+j = n+1] + F2(i+j-n, n) 1[i+j > n+1]`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_probability, Error, Result};
use crate::pipedream::sample_traced;

/// `κ = 2√2 / (3√π)`, the limit of `E inv(w) / n^{3/2}` at `p = 1/2`.
pub fn kappa() -> f64 {
    2.0 * 2f64.sqrt() / (3.0 * std::f64::consts::PI.sqrt())
}

/// Lower and upper constants `2/(3√π)` and `4/(3√π)` bracketing `κ`.
pub fn kappa_bounds() -> (f64, f64) {
    let s = 3.0 * std::f64::consts::PI.sqrt();
    (2.0 / s, 4.0 / s)
}

fn check_args(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::Index { index: i, n });
    }
    Ok(())
}

fn big(v: usize) -> BigInt {
    BigInt::from(v)
}

fn rpow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Exact exit law of pipe `i`, indexed by `j - 1`.
pub fn exit_law_exact(n: usize, i: usize, p: &BigRational) -> Result<Vec<BigRational>> {
    check_args(n, i)?;
    let q = BigRational::one() - p;
    let f1 = |i: usize, j: usize| {
        let mut s = BigRational::zero();
        for k in 0..=(i - 1).min(j - 1) {
            let c = BigRational::from_integer(binomial(big(i - 1), big(k)) * binomial(big(j - 1), big(k)));
            s += c * rpow(&q, 2 * k + 1) * rpow(p, i + j - 2 - 2 * k);
        }
        s
    };
    let f2 = |s_: usize, n: usize| {
        let mut s = BigRational::zero();
        for k in 0..=(s_ - 2).min(n - 1) {
            if n + s_ < 3 + 2 * k {
                break;
            }
            let c = BigRational::from_integer(binomial(big(s_ - 2), big(k)) * binomial(big(n), big(k + 1)));
            s += c * rpow(&q, 2 * k + 2) * rpow(p, n + s_ - 3 - 2 * k);
        }
        s
    };
    Ok((1..=n)
        .map(|j| {
            let mut v = f1(i, j);
            if i + j == n + 1 {
                v += rpow(p, n);
            }
            if i + j > n + 1 {
                v += f2(i + j - n, n);
            }
            v
        })
        .collect())
}

struct LnFact(Vec<f64>);

impl LnFact {
    fn new(m: usize) -> Self {
        let mut t = vec![0.0; m + 1];
        for k in 1..=m {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        LnFact(t)
    }

    fn ln_binom(&self, a: usize, b: usize) -> f64 {
        self.0[a] - self.0[b] - self.0[a - b]
    }
}

/// Kahan-compensated sum.
fn ksum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for x in it {
        let y = x - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

/// Floating-point exit law of pipe `i`, indexed by `j - 1`.
pub fn exit_law(n: usize, i: usize, p: f64) -> Result<Vec<f64>> {
    check_args(n, i)?;
    check_probability(p)?;
    let lf = LnFact::new(2 * n + 2);
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let term = |lc: f64, eq: usize, ep: usize| -> f64 {
        let a = if eq == 0 { 0.0 } else { eq as f64 * lq };
        let b = if ep == 0 { 0.0 } else { ep as f64 * lp };
        (lc + a + b).exp()
    };
    Ok((1..=n)
        .map(|j| {
            let mut v = ksum((0..=(i - 1).min(j - 1)).map(|k| term(lf.ln_binom(i - 1, k) + lf.ln_binom(j - 1, k), 2 * k + 1, i + j - 2 - 2 * k)));
            if i + j == n + 1 {
                v += p.powi(n as i32);
            }
            if i + j > n + 1 {
                let s = i + j - n;
                v += ksum(
                    (0..=(s - 2).min(n - 1))
                        .filter(|&k| n + s >= 3 + 2 * k)
                        .map(|k| term(lf.ln_binom(s - 2, k) + lf.ln_binom(n, k + 1), 2 * k + 2, n + s - 3 - 2 * k)),
                );
            }
            v
        })
        .collect())
}

/// `E|i - w^{-1}_i|` from the exact law.
pub fn expected_abs_displacement(n: usize, i: usize, p: f64) -> Result<f64> {
    let law = exit_law(n, i, p)?;
    Ok(ksum(law.iter().enumerate().map(|(j, &m)| (i as f64 - (j + 1) as f64).abs() * m)))
}

/// Mean and standard error of `inv(w) / n^{3/2}` and `dis(w) / n^{3/2}`,
/// plus the mean fraction of points within `0.05 n` of the diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingReport {
    pub n: usize,
    pub p: f64,
    pub samples: u64,
    pub inv_mean: f64,
    pub inv_se: f64,
    pub dis_mean: f64,
    pub dis_se: f64,
    pub diagonal_fraction: f64,
}

pub fn inversion_scaling_experiment(n: usize, p: f64, samples: u64, seed: u64) -> Result<ScalingReport> {
    check_probability(p)?;
    if samples < 2 {
        return Err(Error::Invalid("need at least two samples".into()));
    }
    let band = 0.05 * n as f64;
    let rows = crate::mc::run(seed, samples, |_, rng| {
        let w = sample_traced(n, p, rng)?;
        let (inv, dis) = (w.inversions(), w.displacement());
        assert!(dis <= 2 * inv && inv <= dis, "Diaconis–Graham inequality violated");
        let near = w.images().iter().enumerate().filter(|&(j, &v)| ((j + 1) as f64 - v as f64).abs() <= band).count();
        Ok((inv as f64, dis as f64, near as f64 / n as f64))
    })?;
    let scale = (n as f64).powf(1.5);
    let stat = |f: &dyn Fn(&(f64, f64, f64)) -> f64| {
        let xs: Vec<f64> = rows.iter().map(|r| f(r) / scale).collect();
        let m = ksum(xs.iter().copied()) / xs.len() as f64;
        let var = ksum(xs.iter().map(|x| (x - m) * (x - m))) / (xs.len() - 1) as f64;
        (m, (var / xs.len() as f64).sqrt())
    };
    let (inv_mean, inv_se) = stat(&|r| r.0);
    let (dis_mean, dis_se) = stat(&|r| r.1);
    let diagonal_fraction = ksum(rows.iter().map(|r| r.2)) / rows.len() as f64;
    Ok(ScalingReport { n, p, samples, inv_mean, inv_se, dis_mean, dis_se, diagonal_fraction })
}
