//! Goodness-of-fit statistics used by the validation suite.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// A test statistic with its p-value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

impl TestResult {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

fn chi2_sf(x: f64, dof: f64) -> f64 {
    if dof <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(dof).map(|d| d.sf(x)).unwrap_or(f64::NAN)
}

/// Pearson chi-square of observed counts against expected probabilities.
///
/// Cells with expected count below `min_expected` are pooled into one cell.
pub fn chi_square(observed: &[u64], expected: &[f64], min_expected: f64) -> Result<TestResult> {
    if observed.is_empty() || observed.len() != expected.len() {
        return Err(Error::Empty);
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::Empty);
    }
    let total = total as f64;
    let mass: f64 = expected.iter().sum();
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        let e = e / mass * total;
        if e < min_expected {
            pool_o += o as f64;
            pool_e += e;
            continue;
        }
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        cells += 1;
    } else if pool_o > 0.0 {
        return Ok(TestResult { statistic: f64::INFINITY, dof: cells as f64, p_value: 0.0 });
    }
    let dof = cells.saturating_sub(1) as f64;
    Ok(TestResult { statistic: stat, dof, p_value: chi2_sf(stat, dof) })
}

/// Chi-square test that two count vectors come from a common law.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<TestResult> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::Empty);
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Empty);
    }
    let (mut stat, mut cells) = (0.0, 0usize);
    for (&x, &y) in a.iter().zip(b) {
        let t = (x + y) as f64;
        if t == 0.0 {
            continue;
        }
        let (ea, eb) = (t * na / (na + nb), t * nb / (na + nb));
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
        cells += 1;
    }
    let dof = cells.saturating_sub(1) as f64;
    Ok(TestResult { statistic: stat, dof, p_value: chi2_sf(stat, dof) })
}

/// Asymptotic Kolmogorov tail `P(K > λ)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let t = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn ks_p(d: f64, ne: f64) -> f64 {
    let r = ne.sqrt();
    kolmogorov_sf((r + 0.12 + 0.11 / r) * d)
}

/// One-sample Kolmogorov–Smirnov distance against a continuous cdf.
pub fn ks_vs_cdf<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<TestResult> {
    if samples.is_empty() {
        return Err(Error::Empty);
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((k + 1) as f64 / n - f).max(f - k as f64 / n);
    }
    Ok(TestResult { statistic: d, dof: n, p_value: ks_p(d, n) })
}

/// Two-sample Kolmogorov–Smirnov distance. Ties are handled exactly.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty);
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j, mut d) = (0, 0, 0f64);
    while i < n && j < m {
        let v = x[i].min(y[j]);
        while i < n && x[i] <= v {
            i += 1;
        }
        while j < m && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    Ok(TestResult { statistic: d, dof: ne, p_value: ks_p(d, ne) })
}

/// Total variation distance `½ Σ |μ - ν|` between two laws on a common index set.
pub fn total_variation(mu: &[f64], nu: &[f64]) -> Result<f64> {
    if mu.is_empty() || mu.len() != nu.len() {
        return Err(Error::Empty);
    }
    Ok(0.5 * mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Sample mean and unbiased standard deviation.
pub fn mean_sd(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::Empty);
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    Ok((m, v.sqrt()))
}

/// Standard normal cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tv_identity() {
        let mu = [0.2, 0.3, 0.5];
        assert_eq!(total_variation(&mu, &mu).unwrap(), 0.0);
        assert!((total_variation(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_self() {
        let xs = [0.3, 0.1, 0.7, 0.5];
        assert_eq!(ks_two_sample(&xs, &xs).unwrap().statistic, 0.0);
        let r = ks_vs_cdf(&[0.5], |x| x).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_reference() {
        assert!((kolmogorov_sf(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_sf(1.628) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn chi_square_exact_fit() {
        let r = chi_square(&[250, 500, 250], &[0.25, 0.5, 0.25], 5.0).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 2.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let r = chi_square(&[100, 0], &[0.5, 0.5], 5.0).unwrap();
        assert!(r.p_value < 1e-10);
    }

    #[test]
    fn homogeneity() {
        let r = chi_square_homogeneity(&[10, 20, 30], &[20, 40, 60]).unwrap();
        assert!(r.statistic.abs() < 1e-12);
    }

    #[test]
    fn normal() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        let v = normal_cdf(1.959963984540054);
        assert!((v - 0.975).abs() < 1e-11, "{v}");
    }
}
