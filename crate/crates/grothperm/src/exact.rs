//! Exact combinatorics behind principal specializations on layered permutations.
//!
//! `D_β(n, k) = det[L_{n+i+j-2}(1+β)]_{i,j=1..k}` where `L_n` is the Narayana
//! polynomial, and `Υ_{w0(k;n)}(β) = (1+β)^{-C(k,2)} D_β(n, k)`.

use std::cmp::Ordering;
use std::ops::{Div, Mul, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::{Composition, Permutation};

/// Largest order accepted by [`optimize_layered`].
pub const LAYERED_CAP: usize = 200;

fn int(v: usize) -> BigInt {
    BigInt::from(v)
}

fn rat(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

pub fn catalan(n: usize) -> BigInt {
    binomial(int(2 * n), int(n)) / int(n + 1)
}

/// `N(n, k) = (1/n) C(n,k) C(n,k-1)`, zero outside `1 <= k <= n`.
pub fn narayana(n: usize, k: usize) -> BigInt {
    if k == 0 || k > n {
        return BigInt::zero();
    }
    binomial(int(n), int(k)) * binomial(int(n), int(k - 1)) / int(n)
}

/// `L_n(x) = Σ_k N(n,k) x^{k-1}`, with `L_0 = 1`.
pub fn narayana_poly(n: usize, x: &BigRational) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    let mut acc = BigRational::zero();
    for k in (1..=n).rev() {
        acc = acc * x + rat(narayana(n, k));
    }
    acc
}

/// Large Schröder numbers `S_0..=S_m` by the three-term recurrence.
pub fn large_schroder_seq(m: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::one(), int(2)];
    for n in 2..=m {
        let v = (int(3 * (2 * n - 1)) * &s[n - 1] - int(n - 2) * &s[n - 2]) / int(n + 1);
        s.push(v);
    }
    s.truncate(m + 1);
    s
}

pub fn large_schroder(n: usize) -> BigInt {
    large_schroder_seq(n).pop().unwrap()
}

/// Little Schröder numbers: `s_0 = 1`, `s_n = S_n / 2`.
pub fn little_schroder_seq(m: usize) -> Vec<BigInt> {
    large_schroder_seq(m).into_iter().enumerate().map(|(n, v)| if n == 0 { v } else { v / 2 }).collect()
}

pub fn little_schroder(n: usize) -> BigInt {
    little_schroder_seq(n).pop().unwrap()
}

/// Determinant by fraction-free Bareiss elimination with row pivoting.
pub fn det_bareiss<T>(mut m: Vec<Vec<T>>) -> T
where
    T: Clone + Zero + One + PartialEq + std::ops::Neg<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T> + Div<&'a T, Output = T>,
{
    let k = m.len();
    if k == 0 {
        return T::one();
    }
    let mut sign = false;
    let mut prev = T::one();
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return T::zero();
        };
        if piv != c {
            m.swap(piv, c);
            sign = !sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                let v = &(&m[r][j] * &m[c][c]) - &(&m[r][c] * &m[c][j]);
                m[r][j] = &v / &prev;
            }
        }
        prev = m[c][c].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

fn hankel_matrix<T: Clone>(seq: &[T], n: usize, k: usize) -> Vec<Vec<T>> {
    (0..k).map(|i| (0..k).map(|j| seq[n + i + j].clone()).collect()).collect()
}

/// Condensation over a sequence `a_0, a_1, ...`: returns columns `k = 0..=kmax` of
/// `D(n, k) = det[a_{n+i+j-2}]`, keeping `n <= keep(k)` in each returned column.
fn condense<T, K>(seq: &[T], kmax: usize, nmax: usize, keep: K) -> Vec<Vec<T>>
where
    T: Clone + Zero + One + PartialEq + std::ops::Neg<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T> + Div<&'a T, Output = T>,
    K: Fn(usize) -> usize,
{
    // Column j must cover n <= nmax + 2 (kmax - j).
    let span = |j: usize| nmax + 2 * (kmax - j);
    let mut out = Vec::with_capacity(kmax + 1);
    let mut c0: Vec<T> = vec![T::one(); span(0) + 1];
    let mut c1: Vec<T> = if kmax >= 1 { seq[..=span(1)].to_vec() } else { Vec::new() };
    out.push(c0[..=keep(0)].to_vec());
    if kmax >= 1 {
        out.push(c1[..=keep(1)].to_vec());
    }
    for k in 2..=kmax {
        let col: Vec<T> = (0..=span(k))
            .map(|n| {
                let piv = &c0[n + 2];
                if piv.is_zero() {
                    det_bareiss(hankel_matrix(seq, n, k))
                } else {
                    let num = &(&c1[n + 2] * &c1[n]) - &(&c1[n + 1] * &c1[n + 1]);
                    &num / piv
                }
            })
            .collect();
        out.push(col[..=keep(k)].to_vec());
        c0 = std::mem::replace(&mut c1, col);
    }
    out
}

fn narayana_seq(beta: &BigRational, len: usize) -> Vec<BigRational> {
    let x = BigRational::one() + beta;
    (0..len).map(|m| narayana_poly(m, &x)).collect()
}

/// `D_β(n, k)` by Dodgson condensation.
pub fn hankel_det(beta: &BigRational, n: usize, k: usize) -> BigRational {
    let seq = narayana_seq(beta, n + 2 * k + 1);
    condense(&seq, k, n, |j| if j == k { n } else { 0 }).pop().unwrap()[n].clone()
}

/// `D_β(n, k)` by direct elimination.
pub fn hankel_det_elimination(beta: &BigRational, n: usize, k: usize) -> BigRational {
    let seq = narayana_seq(beta, n + 2 * k + 1);
    det_bareiss(hankel_matrix(&seq, n, k))
}

/// Table of `D_β(n, k)` for `n + k <= limit`.
#[derive(Clone, Debug)]
pub struct HankelTable {
    beta: BigRational,
    limit: usize,
    cols: Vec<Vec<BigRational>>,
}

impl HankelTable {
    pub fn new(beta: &BigRational, limit: usize) -> Self {
        let seq = narayana_seq(beta, 2 * limit + 2);
        let cols = condense(&seq, limit, 0, |k| limit - k);
        HankelTable { beta: beta.clone(), limit, cols }
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&BigRational> {
        (n + k <= self.limit).then(|| &self.cols[k][n])
    }
}

/// `∏_{1<=i<j<=n} (2k+i+j-1)/(i+j-1)`.
pub fn proctor(k: usize, n: usize) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 1..=n {
        for i in 1..j {
            num *= int(2 * k + i + j - 1);
            den *= int(i + j - 1);
        }
    }
    BigRational::new(num, den)
}

/// `det[C_{n-2+i+j}]_{k×k}`.
pub fn catalan_hankel(k: usize, n: usize) -> BigInt {
    let seq: Vec<BigInt> = (0..n + 2 * k + 1).map(catalan).collect();
    det_bareiss(hankel_matrix(&seq, n, k))
}

/// `Υ_{w0(k;n)}(β)` through the Narayana determinant.
pub fn upsilon_w0(k: usize, n: usize, beta: &BigRational) -> BigRational {
    let scale = num_traits::pow(BigRational::one() + beta, choose2(k));
    hankel_det(beta, n, k) / scale
}

/// `Υ_{w0(k;n)}(1) = 2^{-C(k,2)} det[s_{n-2+i+j}]`.
pub fn upsilon_w0_schroder(k: usize, n: usize) -> BigRational {
    let seq = little_schroder_seq(n + 2 * k);
    BigRational::new(det_bareiss(hankel_matrix(&seq, n, k)), BigInt::one() << choose2(k))
}

/// `Υ_{w0(k;n)}(1) = 2^{-C(k+1,2)} det[S_{n-2+i+j}]` for `n >= 1` (`S_0 = 1` breaks `S_n = 2 s_n`).
pub fn upsilon_w0_large_schroder(k: usize, n: usize) -> BigRational {
    let seq = large_schroder_seq(n + 2 * k);
    BigRational::new(det_bareiss(hankel_matrix(&seq, n, k)), BigInt::one() << choose2(k + 1))
}

/// `w0(k; n) = 1_k × w0(n)`, the layered permutation of `(1^k, n)`.
pub fn w0_kn(k: usize, n: usize) -> Result<Permutation> {
    let mut parts = vec![1; k];
    parts.push(n);
    Ok(Composition::new(parts)?.layered())
}

/// All `2^{m-1}` compositions of `m >= 1`.
pub fn compositions(m: usize) -> Vec<Composition> {
    if m == 0 {
        return Vec::new();
    }
    (0..1u64 << (m - 1))
        .map(|cuts| {
            let mut parts = vec![1];
            for i in 0..m - 1 {
                if cuts >> i & 1 == 1 {
                    parts.push(1);
                } else {
                    *parts.last_mut().unwrap() += 1;
                }
            }
            Composition::new(parts).expect("parts are positive")
        })
        .collect()
}

/// `Υ_{w(b)}(β) = ∏_i Υ_{w0(k_i; b_i)}(β)` with `k_i = n - b_1 - ... - b_i`.
pub fn upsilon_layered(b: &Composition, beta: &BigRational) -> BigRational {
    let mut k = b.total();
    let mut acc = BigRational::one();
    for &part in b.parts().iter().rev() {
        k -= part;
        acc *= upsilon_w0(k, part, beta);
    }
    acc
}

/// `∏_{k=0}^{n-1} (3k+1)! / (n+k)!`.
pub fn asm_count(n: usize) -> BigInt {
    let fact = |m: usize| (1..=m).fold(BigInt::one(), |a, v| a * int(v));
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for k in 0..n {
        num *= fact(3 * k + 1);
        den *= fact(n + k);
    }
    num / den
}

/// `log2 x` for a positive integer, absolute error below `2^-50`.
pub fn log2_exact(x: &BigInt) -> Result<f64> {
    if x.sign() != Sign::Plus {
        return Err(Error::Invalid(format!("log2 of nonpositive {x}")));
    }
    let bits = x.bits();
    if bits <= 64 {
        return Ok(x.to_u64().unwrap() as f64).map(f64::log2);
    }
    let top = (x >> (bits - 64)).to_u64().unwrap();
    Ok((bits - 64) as f64 + (top as f64).log2())
}

pub fn log2_exact_rational(x: &BigRational) -> Result<f64> {
    if !x.is_positive() {
        return Err(Error::Invalid(format!("log2 of nonpositive {x}")));
    }
    Ok(log2_exact(x.numer())? - log2_exact(x.denom())?)
}

/// Bounds on `c(β)`.
pub fn beta_bounds(beta: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Invalid(format!("β = {beta} must be positive")));
    }
    let l2 = f64::log2;
    let lower = 0.25 * l2(2.0 + beta).max(2.0 * l2(1.0 + beta.min(1.0 / beta)));
    let upper = if beta <= 1.0 { 0.5 * l2(2.0 + beta).min(l2(1.0 + 1.0 / beta)) } else { 0.5 * l2(1.0 + beta) };
    Ok((lower, upper))
}

/// Best layered composition of `n` at `β = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredOptimum {
    pub n: usize,
    pub composition: Composition,
    pub upsilon: BigInt,
    pub f: f64,
}

impl LayeredOptimum {
    /// Table row `n,b_l-...-b_1,f` with `f` to five decimals.
    pub fn csv_row(&self) -> String {
        format!("{},{},{:.5}", self.n, self.composition, self.f)
    }
}

/// Exact `F(k, m) = Υ_{w0(k;m)}(1)` for `k + m <= limit`, with their logarithms.
#[derive(Clone, Debug)]
pub struct LayeredTable {
    limit: usize,
    f: Vec<Vec<BigInt>>,
    log2: Vec<Vec<f64>>,
}

impl LayeredTable {
    pub fn new(limit: usize) -> Result<Self> {
        if limit > LAYERED_CAP {
            return Err(Error::Cap { n: limit, cap: LAYERED_CAP });
        }
        let seq = little_schroder_seq(2 * limit + 2);
        let cols = condense(&seq, limit, 0, |k| limit - k);
        let f: Vec<Vec<BigInt>> = cols.into_iter().enumerate().map(|(k, col)| col.into_iter().map(|d| d >> choose2(k)).collect()).collect();
        let log2 = f.iter().map(|col| col.iter().map(|v| log2_exact(v).expect("positive determinant")).collect()).collect();
        Ok(LayeredTable { limit, f, log2 })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `F(k, m)`, indexed as in `w0(k; m)`.
    pub fn f(&self, k: usize, m: usize) -> &BigInt {
        &self.f[k][m]
    }

    pub fn log2_f(&self, k: usize, m: usize) -> f64 {
        self.log2[k][m]
    }

    /// Optima for every order `1..=limit`; entry `s - 1` belongs to order `s`.
    pub fn optimize_all(&self) -> Vec<LayeredOptimum> {
        const TIE: f64 = 1e-6;
        let mut best: Vec<(Vec<usize>, BigInt, f64)> = vec![(Vec::new(), BigInt::one(), 0.0)];
        for s in 1..=self.limit {
            let vals: Vec<f64> = (1..=s).map(|b1| best[s - b1].2 + self.log2[s - b1][b1]).collect();
            let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut winner: Option<(Vec<usize>, BigInt)> = None;
            for b1 in 1..=s {
                if vals[b1 - 1] < top - TIE {
                    continue;
                }
                let (prefix, exact, _) = &best[s - b1];
                let value = exact * &self.f[s - b1][b1];
                let mut comp = prefix.clone();
                comp.push(b1);
                let better = match &winner {
                    None => true,
                    Some((wc, wv)) => match value.cmp(wv) {
                        Ordering::Greater => true,
                        Ordering::Equal => comp < *wc,
                        Ordering::Less => false,
                    },
                };
                if better {
                    winner = Some((comp, value));
                }
            }
            let (comp, value) = winner.expect("nonempty candidate set");
            let lg = log2_exact(&value).expect("positive");
            best.push((comp, value, lg));
        }
        best.into_iter()
            .enumerate()
            .skip(1)
            .map(|(s, (comp, upsilon, lg))| LayeredOptimum {
                n: s,
                composition: Composition::new(comp).expect("positive parts"),
                upsilon,
                f: lg / (s * s) as f64,
            })
            .collect()
    }
}

/// Maximizer of `Υ_{w(b)}(1)` over compositions of `n`; ties go to the
/// lexicographically smallest `b`.
pub fn optimize_layered(n: usize) -> Result<LayeredOptimum> {
    if n == 0 {
        return Err(Error::Invalid("order must be positive".into()));
    }
    Ok(LayeredTable::new(n)?.optimize_all().pop().unwrap())
}
