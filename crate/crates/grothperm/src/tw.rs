//! Tracy–Widom GUE distribution `F_2(s) = det(I - K_Ai)` on `L^2(s, ∞)`.
//!
//! Nyström discretization: Gauss–Legendre nodes in `u ∈ (0, 1)` mapped to
//! `x = s - c ln(1 - u)`, then a dense determinant.

use nalgebra::DMatrix;

use crate::airy::airy;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// Quadrature rule for the Fredholm determinant.
#[derive(Clone, Debug)]
pub struct TwQuadrature {
    u: Vec<f64>,
    w: Vec<f64>,
    scale: f64,
}

impl Default for TwQuadrature {
    fn default() -> Self {
        TwQuadrature::new(60)
    }
}

impl TwQuadrature {
    pub fn new(nodes: usize) -> Self {
        let (x, w) = gauss_legendre(nodes);
        TwQuadrature { u: x.iter().map(|t| (t + 1.0) / 2.0).collect(), w: w.iter().map(|v| v / 2.0).collect(), scale: 3.0 }
    }

    pub fn nodes(&self) -> usize {
        self.u.len()
    }

    /// `F_2(s)`.
    pub fn cdf(&self, s: f64) -> f64 {
        let m = self.u.len();
        let mut x = Vec::with_capacity(m);
        let mut sw = Vec::with_capacity(m);
        let mut a = Vec::with_capacity(m);
        for (&u, &w) in self.u.iter().zip(&self.w) {
            x.push(s - self.scale * (1.0 - u).ln());
            sw.push((w * self.scale / (1.0 - u)).sqrt());
            a.push(airy(*x.last().unwrap()));
        }
        let k = DMatrix::from_fn(m, m, |i, j| {
            let (ai, api) = a[i];
            let (aj, apj) = a[j];
            let kij = if i == j { api * api - x[i] * ai * ai } else { (ai * apj - api * aj) / (x[i] - x[j]) };
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - sw[i] * kij * sw[j]
        });
        k.lu().determinant().clamp(0.0, 1.0)
    }

    /// Mean and standard deviation from `∫ (1 - F)` and `∫ F` tails.
    pub fn moments(&self) -> (f64, f64) {
        let (gx, gw) = gauss_legendre(20);
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let panel = |a: f64, b: f64, f: &dyn Fn(f64) -> (f64, f64), m1: &mut f64, m2: &mut f64| {
            for (t, w) in gx.iter().zip(&gw) {
                let s = (a + b) / 2.0 + (b - a) / 2.0 * t;
                let (g1, g2) = f(s);
                *m1 += w * (b - a) / 2.0 * g1;
                *m2 += w * (b - a) / 2.0 * g2;
            }
        };
        let lower = -12.0;
        let upper = 10.0;
        let steps = 22;
        for i in 0..steps {
            let a = lower + (0.0 - lower) * i as f64 / steps as f64;
            let b = lower + (0.0 - lower) * (i + 1) as f64 / steps as f64;
            panel(a, b, &|s| {
                let f = self.cdf(s);
                (-f, -2.0 * s * f)
            }, &mut m1, &mut m2);
            let a = upper * i as f64 / steps as f64;
            let b = upper * (i + 1) as f64 / steps as f64;
            panel(a, b, &|s| {
                let g = 1.0 - self.cdf(s);
                (g, 2.0 * s * g)
            }, &mut m1, &mut m2);
        }
        let var = m2 - m1 * m1;
        (m1, var.sqrt())
    }
}

/// `F_2(r)` with the default rule.
pub fn tw2_cdf(r: f64) -> f64 {
    TwQuadrature::default().cdf(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn known_values() {
        let q = TwQuadrature::default();
        assert!((q.cdf(0.0) - 0.969372828355).abs() < 1e-8, "{}", q.cdf(0.0));
        assert!(1.0 - q.cdf(8.0) < 1e-10);
        assert!(q.cdf(-8.0) < 1e-15);
        let fine = TwQuadrature::new(100);
        for s in [-6.0, -3.0, -1.0, 0.0, 2.0] {
            assert!((q.cdf(s) - fine.cdf(s)).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn moments_match_tables() {
        let (mean, sd) = TwQuadrature::default().moments();
        assert!((mean + 1.7710868074).abs() < 1e-7, "mean {mean}");
        assert!((sd - 0.8131947928f64.sqrt()).abs() < 1e-7, "sd {sd}");
        let (m2, s2) = TwQuadrature::new(90).moments();
        assert!((m2 - mean).abs() < 1e-6 && (s2 - sd).abs() < 1e-6);
    }
}
