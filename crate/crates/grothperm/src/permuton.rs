//! Limit shape of Grothendieck permutations.
//!
//! `h°(x, y)` is the limit of `H(⌊nx⌋, ⌊ny⌋) / n`, the mass of `[x, 1] × [y, 1]`
//! under the limiting permuton. The unit square splits into four zones:
//!
//! - `A`: `x < 1 - p` and `y > x / (1 - p)`, where `h° = 1 - y`;
//! - `B`: `y < (1 - p) x`, where `h° = 1 - x`;
//! - `C`: between the two lines and inside the ellipse
//!   `(y - x)^2 / p + (y + x - 1)^2 / (1 - p) = 1`, where
//!   `h° = 1 + (2/p) √((1-p) x y) - (x + y) / p`;
//! - `D`: between the lines and beyond the ellipse, where `h° = 0`.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::mc;
use crate::rng::Geometric;
use crate::stats::{ks_vs_cdf, mean_sd};
use crate::tasep::{height_via_tasep, inverse_scale_sum};
use crate::tw::TwQuadrature;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Zone {
    A,
    B,
    C,
    D,
    Boundary,
}

const TIE: f64 = 1e-13;

fn check(x: f64, y: f64, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain { x, y, why: "outside the unit square" });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Probability(p));
    }
    Ok(())
}

fn h_curved(x: f64, y: f64, p: f64) -> f64 {
    1.0 + 2.0 / p * ((1.0 - p) * x * y).sqrt() - (x + y) / p
}

pub fn zone(x: f64, y: f64, p: f64) -> Result<Zone> {
    check(x, y, p)?;
    let q = 1.0 - p;
    let upper = y - x / q;
    let lower = y - q * x;
    if upper.abs() < TIE || lower.abs() < TIE {
        return Ok(Zone::Boundary);
    }
    if upper > 0.0 {
        return Ok(if x < q { Zone::A } else { Zone::Boundary });
    }
    if lower < 0.0 {
        return Ok(Zone::B);
    }
    let h = h_curved(x, y, p);
    Ok(if h.abs() < TIE {
        Zone::Boundary
    } else if h > 0.0 {
        Zone::C
    } else {
        Zone::D
    })
}

/// `h°(x, y)`; boundaries use the zone-C formula clipped at 0.
pub fn limit_height(x: f64, y: f64, p: f64) -> Result<f64> {
    Ok(match zone(x, y, p)? {
        Zone::A => 1.0 - y,
        Zone::B => 1.0 - x,
        Zone::C => h_curved(x, y, p),
        Zone::D => 0.0,
        Zone::Boundary => h_curved(x, y, p).max(0.0),
    })
}

/// `x_p(y) = (√(p(1-y)) + √(y(1-p)))^2`, the ellipse over `y > 1 - p`.
pub fn ellipse_x(y: f64, p: f64) -> Result<f64> {
    if !(y > 1.0 - p && y <= 1.0) {
        return Err(Error::Domain { x: f64::NAN, y, why: "ellipse_x needs 1 - p < y <= 1" });
    }
    Ok(((p * (1.0 - y)).sqrt() + (y * (1.0 - p)).sqrt()).powi(2))
}

/// Left side of the ellipse equation minus one.
pub fn ellipse_residual(x: f64, y: f64, p: f64) -> f64 {
    (y - x).powi(2) / p + (y + x - 1.0).powi(2) / (1.0 - p) - 1.0
}

/// `P(X <= x | Y = y)` for the limiting permuton.
pub fn conditional_cdf(x: f64, y: f64, p: f64) -> Result<f64> {
    Ok(match zone(x, y, p)? {
        Zone::A => 0.0,
        Zone::B | Zone::D => 1.0,
        Zone::C | Zone::Boundary => ((p - 1.0) / p + ((1.0 - p) * x * y).sqrt() / (p * y)).clamp(0.0, 1.0),
    })
}

/// `h•(x, y) = P(X <= x, Y <= y)`.
pub fn copula(x: f64, y: f64, p: f64) -> Result<f64> {
    Ok(match zone(x, y, p)? {
        Zone::A => x,
        Zone::B => y,
        Zone::C => (p - 1.0) / p * (x + y) + 2.0 / p * ((1.0 - p) * x * y).sqrt(),
        Zone::D => x + y - 1.0,
        Zone::Boundary => limit_height(x, y, p)? + x + y - 1.0,
    })
}

/// Mass of the atom of `X | Y = y` at `x_p(y)`.
pub fn atom_mass(y: f64, p: f64) -> Result<f64> {
    if !(y > 1.0 - p && y <= 1.0) {
        return Err(Error::Domain { x: f64::NAN, y, why: "atom needs 1 - p < y <= 1" });
    }
    let q = 1.0 - p;
    Ok(1.0 / p - q.sqrt() * ((p * (1.0 - y)).sqrt() + (y * q).sqrt()) / (p * y.sqrt()))
}

/// `γ_p = 1 - √((1-p)/p) arccos √(1-p)`: the singular mass on the ellipse
/// and the limit of `inv(w) / C(n, 2)`.
pub fn gamma_p(p: f64) -> f64 {
    1.0 - ((1.0 - p) / p).sqrt() * (1.0 - p).sqrt().acos()
}

fn check_c(x: f64, y: f64, p: f64) -> Result<f64> {
    if zone(x, y, p)? != Zone::C {
        return Err(Error::Domain { x, y, why: "fluctuation constants live in the open zone C" });
    }
    Ok(h_curved(x, y, p))
}

/// `1/v1 + 1/v2` of the TASEP at `m = 1 - x - h°`, `t = y`. It is the factor
/// `r ↦ F_2(r · rate)` in `P(H <= n h° + r n^{1/3})`.
pub fn fluct_rate(x: f64, y: f64, p: f64) -> Result<f64> {
    let h = check_c(x, y, p)?;
    Ok(inverse_scale_sum(1.0 - x - h, y, p))
}

/// Fluctuation scale `v(x, y)`: `(H - n h°) / (v n^{1/3})` tends to the
/// Tracy–Widom GUE law. Equal to `1 / fluct_rate`.
pub fn fluct_constant(x: f64, y: f64, p: f64) -> Result<f64> {
    Ok(1.0 / fluct_rate(x, y, p)?)
}

/// Mergeable `g × g` histogram of permutation points `(w_j, j)`.
/// Row index bins the value, column index bins the position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalGrid {
    pub g: usize,
    pub n: usize,
    pub counts: Vec<u64>,
    pub samples: u64,
}

/// Max and mean `|H/n - h°|` over grid corners.
#[derive(Clone, Copy, Debug)]
pub struct GridDeviation {
    pub max_abs: f64,
    pub mean_abs: f64,
}

impl EmpiricalGrid {
    pub fn new(g: usize, n: usize) -> Self {
        EmpiricalGrid { g, n, counts: vec![0; g * g], samples: 0 }
    }

    fn bin(&self, v: usize) -> usize {
        (v - 1) * self.g / self.n
    }

    pub fn add(&mut self, w: &Permutation) -> Result<()> {
        if w.n() != self.n {
            return Err(Error::OrderMismatch(w.n(), self.n));
        }
        for (j, &v) in w.images().iter().enumerate() {
            let (r, c) = (self.bin(v as usize), self.bin(j + 1));
            self.counts[r * self.g + c] += 1;
        }
        self.samples += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: EmpiricalGrid) -> Result<()> {
        if other.n != self.n || other.g != self.g {
            return Err(Error::OrderMismatch(other.n, self.n));
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.samples += other.samples;
        Ok(())
    }

    pub fn cell(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.g + col]
    }

    /// Mean `H / n` at the corner `(a/g, b/g)` for `0 <= a, b <= g`.
    pub fn heights(&self) -> Vec<f64> {
        let g = self.g;
        let mut s = vec![0u64; (g + 1) * (g + 1)];
        for a in (0..g).rev() {
            for b in (0..g).rev() {
                s[a * (g + 1) + b] = self.counts[a * g + b] + s[(a + 1) * (g + 1) + b] + s[a * (g + 1) + b + 1] - s[(a + 1) * (g + 1) + b + 1];
            }
        }
        let norm = (self.samples.max(1) * self.n as u64) as f64;
        s.into_iter().map(|v| v as f64 / norm).collect()
    }

    pub fn compare_to_limit(&self, p: f64) -> Result<GridDeviation> {
        let g = self.g;
        let h = self.heights();
        let mut max_abs: f64 = 0.0;
        let mut sum = 0.0;
        for a in 0..=g {
            for b in 0..=g {
                let d = (h[a * (g + 1) + b] - limit_height(a as f64 / g as f64, b as f64 / g as f64, p)?).abs();
                max_abs = max_abs.max(d);
                sum += d;
            }
        }
        Ok(GridDeviation { max_abs, mean_abs: sum / ((g + 1) * (g + 1)) as f64 })
    }

    /// Cell masses scaled linearly to `0..=255` by the largest cell.
    pub fn grayscale(&self) -> Vec<u8> {
        let max = self.counts.iter().copied().max().unwrap_or(0).max(1);
        self.counts.iter().map(|&c| ((c as f64 / max as f64) * 255.0).round() as u8).collect()
    }
}

/// Fraction of points of `w` within Euclidean distance `radius` of the
/// ellipse arc `x = x_p(y)`, in unit-square coordinates.
pub fn near_ellipse_fraction(w: &Permutation, p: f64, radius: f64) -> f64 {
    let n = w.n() as f64;
    let near = w
        .images()
        .iter()
        .enumerate()
        .filter(|&(j, &v)| {
            let (x, y) = (v as f64 / n, (j + 1) as f64 / n);
            let e = ellipse_residual(x, y, p);
            let gx = -2.0 * (y - x) / p + 2.0 * (y + x - 1.0) / (1.0 - p);
            let gy = 2.0 * (y - x) / p + 2.0 * (y + x - 1.0) / (1.0 - p);
            x + y > 1.0 && e.abs() / (gx * gx + gy * gy).sqrt() <= radius
        })
        .count();
    near as f64 / n
}

/// Standardized height samples `(H - n h°) / (v n^{1/3})` at
/// `(⌊n x⌋, ⌊n y⌋)`, one TASEP run per sample.
pub fn standardized_heights(n: usize, x: f64, y: f64, p: f64, samples: u64, seed: u64) -> Result<Vec<f64>> {
    let v = fluct_constant(x, y, p)?;
    let h = limit_height(x, y, p)?;
    let nf = n as f64;
    let (xi, yi) = (((nf * x) as usize).max(1), ((nf * y) as usize).max(1));
    let geo = Geometric::new(p)?;
    let scale = v * nf.cbrt();
    mc::run(seed, samples, |_, rng| Ok((height_via_tasep(n, xi, yi, &geo, rng)? as f64 - nf * h) / scale))
}

/// Moments and KS distance of standardized heights against `F_2`.
#[derive(Clone, Copy, Debug)]
pub struct FluctReport {
    pub mean: f64,
    pub sd: f64,
    pub tw_mean: f64,
    pub tw_sd: f64,
    pub ks: f64,
}

pub fn fluct_report(samples: &[f64]) -> Result<FluctReport> {
    let (mean, sd) = mean_sd(samples)?;
    let tw = TwQuadrature::default();
    let (tw_mean, tw_sd) = tw.moments();
    let ks = ks_vs_cdf(samples, |r| tw.cdf(r))?.statistic;
    Ok(FluctReport { mean, sd, tw_mean, tw_sd, ks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zones() {
        assert_eq!(zone(0.1, 0.9, 0.75).unwrap(), Zone::A);
        assert_eq!(zone(0.9, 0.1, 0.75).unwrap(), Zone::B);
        assert_eq!(zone(0.99, 0.99, 0.5).unwrap(), Zone::D);
        assert_eq!(zone(0.5, 0.5, 0.5).unwrap(), Zone::C);
        assert!(zone(1.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn heights() {
        let h = limit_height(0.5, 0.5, 0.5).unwrap();
        assert!((h - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        for t in [0.0, 0.3, 0.8, 1.0] {
            assert!((limit_height(t, 0.0, 0.4).unwrap() - (1.0 - t)).abs() < 1e-12);
            assert!((limit_height(0.0, t, 0.4).unwrap() - (1.0 - t)).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_and_atom() {
        let p = 0.6;
        assert!((ellipse_x(1.0, p).unwrap() - 0.4).abs() < 1e-15);
        assert!((ellipse_x(0.4 + 1e-12, p).unwrap() - 1.0).abs() < 1e-5);
        for y in [0.5, 0.7, 0.95] {
            let x = ellipse_x(y, p).unwrap();
            assert!(ellipse_residual(x, y, p).abs() < 1e-12);
        }
        assert!((atom_mass(1.0, p).unwrap() - 1.0).abs() < 1e-14);
        assert!(atom_mass(0.4 + 1e-12, p).unwrap().abs() < 1e-5);
        assert!(atom_mass(0.3, p).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_p(0.5) - (1.0 - std::f64::consts::FRAC_PI_4)).abs() < 1e-15);
        assert!(gamma_p(1e-9) < 1e-8);
        assert!(gamma_p(1.0 - 1e-12) > 1.0 - 1e-5);
    }

    #[test]
    fn grid_merge_is_additive() {
        let a: Permutation = "2413".parse().unwrap();
        let b: Permutation = "4321".parse().unwrap();
        let mut g1 = EmpiricalGrid::new(2, 4);
        g1.add(&a).unwrap();
        let mut g2 = EmpiricalGrid::new(2, 4);
        g2.add(&b).unwrap();
        let mut both = EmpiricalGrid::new(2, 4);
        both.add(&a).unwrap();
        both.add(&b).unwrap();
        g1.merge(g2).unwrap();
        assert_eq!(g1, both);
        assert!(both.add(&Permutation::identity(3)).is_err());
        let mut id = EmpiricalGrid::new(4, 8);
        id.add(&Permutation::identity(8)).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(id.cell(r, c), if r == c { 2 } else { 0 });
            }
        }
    }
}
