//! Pipe dreams on the staircase `{(i, j) : i, j >= 1, i + j <= n}`.
//!
//! Row `i` runs top to bottom, column `j` left to right. Pipe `i` enters row
//! `i` from the left; boxes on `i + j = n + 1` are fixed half-bumps turning
//! the pipe upward. A cross tile passes both pipes straight, an elbow sends
//! the left pipe up and the bottom pipe right. `w(D)_j` is the pipe leaving
//! the top of column `j`.
//!
//! Tiles are stored as a bitset in row-major staircase order: box `(i, j)`
//! has index `(i-1) n - (i-1) i / 2 + (j-1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{check_probability, Error, Result};
use crate::perm::{HeckeWord, Permutation};
use crate::rng::Coin;

/// Default cap on exhaustive enumeration (`2^21` dreams at `n = 7`).
pub const ENUMERATION_CAP: usize = 7;

/// Order-6 dream with nine crosses; reduces to 241653, traces to 241635.
pub const WORKED_EXAMPLE: &str = "n=6\n++.+.\n..++\n++.\n.+\n+\n";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PipeDream {
    n: usize,
    bits: Vec<u64>,
}

/// Visit order of a reduction and which crosses were demoted to bumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub visited: Vec<(usize, usize)>,
    pub demoted: Vec<bool>,
}

impl ReductionTrace {
    pub fn demotions(&self) -> usize {
        self.demoted.iter().filter(|&&d| d).count()
    }
}

pub fn num_boxes(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl PipeDream {
    /// The all-elbow dream.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "order must be positive");
        PipeDream { n, bits: vec![0; num_boxes(n).div_ceil(64)] }
    }

    pub fn all_crosses(n: usize) -> Self {
        let mut d = PipeDream::new(n);
        for k in 0..num_boxes(n) {
            d.bits[k / 64] |= 1 << (k % 64);
        }
        d
    }

    pub fn from_crosses(n: usize, crosses: &[(usize, usize)]) -> Result<Self> {
        let mut d = PipeDream::new(n);
        for &(i, j) in crosses {
            d.check_box(i, j)?;
            d.set(i, j, true);
        }
        Ok(d)
    }

    /// Dream whose box with index `k` is a cross iff bit `k` of `mask` is set.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut d = PipeDream::new(n);
        if !d.bits.is_empty() {
            d.bits[0] = mask;
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_boxes(&self) -> usize {
        num_boxes(self.n)
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n - (i - 1) * i / 2 + (j - 1)
    }

    fn check_box(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || j == 0 || i + j > self.n {
            return Err(Error::Invalid(format!("({i}, {j}) is not a box of the order-{} staircase", self.n)));
        }
        Ok(())
    }

    #[inline]
    pub fn is_cross(&self, i: usize, j: usize) -> bool {
        let k = self.index(i, j);
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, cross: bool) {
        let k = self.index(i, j);
        if cross {
            self.bits[k / 64] |= 1 << (k % 64);
        } else {
            self.bits[k / 64] &= !(1 << (k % 64));
        }
    }

    pub fn cross_count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Boxes in the reduction order: columns left to right, each bottom-up.
    pub fn column_order(n: usize) -> impl Iterator<Item = (usize, usize)> {
        (1..n).flat_map(move |j| (1..=n - j).rev().map(move |i| (i, j)))
    }

    /// Independent Bernoulli(p) cross in every box, drawn in column order.
    pub fn sample<R: RngCore>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        let mut coin = Coin::new(p)?;
        let mut d = PipeDream::new(n);
        for (i, j) in PipeDream::column_order(n) {
            if coin.flip(rng) {
                d.set(i, j, true);
            }
        }
        Ok(d)
    }

    /// Sweep the columns left to right, bottom-up. `cross(i, j, a, b)` sees
    /// the bottom pipe `a` and left pipe `b` at box `(i, j)` and decides
    /// whether they pass straight. Returns the exit labels.
    fn sweep<F: FnMut(usize, usize, u32, u32) -> bool>(n: usize, mut cross: F) -> Permutation {
        let mut horiz: Vec<u32> = (0..=n as u32).collect();
        let mut w = vec![0u32; n];
        for j in 1..=n {
            let mut vert = horiz[n + 1 - j];
            for i in (1..=n - j).rev() {
                let b = horiz[i];
                if !cross(i, j, vert, b) {
                    horiz[i] = vert;
                    vert = b;
                }
            }
            w[j - 1] = vert;
        }
        Permutation::from_raw(w)
    }

    /// Trace pipes with every cross tile crossing (no reduction).
    pub fn trace(&self) -> Permutation {
        PipeDream::sweep(self.n, |i, j, _, _| self.is_cross(i, j))
    }

    /// `w(D)`: tracing after reduction. Two pipes meeting at a cross have
    /// already crossed exactly when the smaller label arrives from below,
    /// so the reduction needs no pair table here.
    pub fn permutation(&self) -> Permutation {
        PipeDream::sweep(self.n, |i, j, a, b| a > b && self.is_cross(i, j))
    }

    /// Reduction with an explicit table of crossed pipe pairs.
    pub fn reduce(&self) -> (PipeDream, ReductionTrace) {
        let n = self.n;
        let mut crossed = vec![false; (n + 1) * (n + 1)];
        let mut out = self.clone();
        let mut trace = ReductionTrace { visited: Vec::new(), demoted: Vec::new() };
        PipeDream::sweep(n, |i, j, a, b| {
            trace.visited.push((i, j));
            let mut straight = self.is_cross(i, j);
            let mut demoted = false;
            if straight {
                let key = a.min(b) as usize * (n + 1) + a.max(b) as usize;
                if crossed[key] {
                    straight = false;
                    demoted = true;
                    out.set(i, j, false);
                } else {
                    crossed[key] = true;
                }
            }
            trace.demoted.push(demoted);
            straight
        });
        (out, trace)
    }

    /// Number of times each pair of pipes crosses under plain tracing,
    /// indexed `[a * (n + 1) + b]` with `a < b`.
    pub fn crossing_counts(&self) -> Vec<u32> {
        let n = self.n;
        let mut counts = vec![0u32; (n + 1) * (n + 1)];
        PipeDream::sweep(n, |i, j, a, b| {
            let c = self.is_cross(i, j);
            if c {
                counts[a.min(b) as usize * (n + 1) + a.max(b) as usize] += 1;
            }
            c
        });
        counts
    }

    pub fn is_reduced(&self) -> bool {
        self.crossing_counts().iter().all(|&c| c <= 1)
    }

    /// Word of cross letters `s_{i+j-1}` read in column order.
    pub fn word(&self) -> HeckeWord {
        let letters = PipeDream::column_order(self.n).filter(|&(i, j)| self.is_cross(i, j)).map(|(i, j)| i + j - 1).collect();
        HeckeWord::new(letters, self.n).expect("staircase letters are in range")
    }

    /// `w(D)` as the inverse of the 0-Hecke product of the word.
    pub fn permutation_via_demazure(&self) -> Permutation {
        self.word().demazure_product().inverse()
    }

    /// Randomized reduction along anti-diagonals `τ = j - i`. Pipes that
    /// already crossed cross again with probability `q`; the stream is read
    /// only when `0 < q < 1`.
    pub fn q_reduce<R: RngCore>(&self, q: f64, rng: &mut R) -> Result<Permutation> {
        let mut coin = Coin::new(q)?;
        let n = self.n;
        let mut horiz: Vec<u32> = (0..=n as u32).collect();
        let mut vert = vec![0u32; n + 1];
        let t = n as i64 - 2;
        for tau in -t..=t {
            let lo = (1 - tau).max(1) as usize;
            for i in lo.. {
                let j = (i as i64 + tau) as usize;
                if i + j > n {
                    break;
                }
                let a = if i + j == n { horiz[i + 1] } else { vert[j] };
                let b = horiz[i];
                let straight = self.is_cross(i, j) && (a > b || coin.flip(rng));
                if straight {
                    vert[j] = a;
                } else {
                    vert[j] = b;
                    horiz[i] = a;
                }
            }
        }
        let mut w: Vec<u32> = vert[1..n].to_vec();
        w.push(horiz[1]);
        Ok(Permutation::from_raw(w))
    }
}

/// `w(D)` of a Bernoulli(p) dream without storing it. Consumes the stream
/// exactly as `PipeDream::sample` followed by `permutation`.
pub fn sample_permutation<R: RngCore>(n: usize, p: f64, rng: &mut R) -> Result<Permutation> {
    let mut coin = Coin::new(p)?;
    Ok(PipeDream::sweep(n, |_, _, a, b| coin.flip(rng) & (a > b)))
}

/// Bernoulli(p) dream traced with no reduction (the `q = 1` model).
pub fn sample_traced<R: RngCore>(n: usize, p: f64, rng: &mut R) -> Result<Permutation> {
    let mut coin = Coin::new(p)?;
    Ok(PipeDream::sweep(n, |_, _, _, _| coin.flip(rng)))
}

impl fmt::Display for PipeDream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for i in 1..self.n {
            let row: String = (1..=self.n - i).map(|j| if self.is_cross(i, j) { '+' } else { '.' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl FromStr for PipeDream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let head = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let n: usize = head
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("expected n=<order>, got {head:?}") })?;
        let mut d = PipeDream::new(n);
        for i in 1..n {
            let row = lines.next().ok_or_else(|| Error::Parse { line: i + 1, msg: "missing row".into() })?;
            if row.chars().count() != n - i {
                return Err(Error::Parse { line: i + 1, msg: format!("row {i} needs {} tiles", n - i) });
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '+' => d.set(i, j + 1, true),
                    '.' => {}
                    _ => return Err(Error::Parse { line: i + 1, msg: format!("bad tile {c:?}") }),
                }
            }
        }
        if let Some((k, extra)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse { line: n + 1 + k, msg: format!("trailing content {extra:?}") });
        }
        Ok(d)
    }
}

/// All `2^{C(n,2)}` dreams of order `n`.
pub fn enumerate(n: usize) -> Result<impl Iterator<Item = PipeDream>> {
    enumerate_capped(n, ENUMERATION_CAP)
}

pub fn enumerate_capped(n: usize, cap: usize) -> Result<impl Iterator<Item = PipeDream>> {
    if n > cap || num_boxes(n) >= 64 {
        return Err(Error::Cap { n, cap });
    }
    Ok((0..1u64 << num_boxes(n)).map(move |m| PipeDream::from_mask(n, m)))
}

/// For each permutation of order `n`, the number of dreams reducing to it
/// with each cross count: `counts[w][c]`.
pub fn cross_count_table(n: usize) -> Result<BTreeMap<Permutation, Vec<u64>>> {
    let nb = num_boxes(n);
    let mut table: BTreeMap<Permutation, Vec<u64>> = BTreeMap::new();
    for d in enumerate(n)? {
        let c = d.cross_count();
        table.entry(d.permutation()).or_insert_with(|| vec![0; nb + 1])[c] += 1;
    }
    Ok(table)
}

/// `Υ_w(β) = Σ_{D : w(D) = w} β^{#cross(D) - ℓ(w)}`, by enumeration.
pub fn upsilon_bruteforce(w: &Permutation, beta: &BigRational) -> Result<BigRational> {
    let table = cross_count_table(w.n())?;
    Ok(upsilon_from_counts(table.get(w).map(|v| v.as_slice()).unwrap_or(&[]), w.inversions() as usize, beta))
}

/// `Υ_w(β)` for every `w` of order `n` from one enumeration.
pub fn upsilon_table(n: usize, beta: &BigRational) -> Result<BTreeMap<Permutation, BigRational>> {
    Ok(cross_count_table(n)?
        .into_iter()
        .map(|(w, counts)| {
            let u = upsilon_from_counts(&counts, w.inversions() as usize, beta);
            (w, u)
        })
        .collect())
}

pub(crate) fn upsilon_from_counts(counts: &[u64], len: usize, beta: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for (c, &k) in counts.iter().enumerate() {
        if k > 0 {
            assert!(c >= len, "a dream of w has at least ℓ(w) crosses");
            total += BigRational::from_integer(BigInt::from(k)) * pow(beta, c - len);
        }
    }
    total
}

pub(crate) fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Law of `w(D)` for a Bernoulli(p) dream, exact in `p`.
pub fn exact_distribution(n: usize, p: &BigRational) -> Result<BTreeMap<Permutation, BigRational>> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::Invalid(format!("probability {p} outside [0, 1]")));
    }
    let nb = num_boxes(n);
    let q = BigRational::one() - p;
    let table = cross_count_table(n)?;
    Ok(table
        .into_iter()
        .map(|(w, counts)| {
            let mut total = BigRational::zero();
            for (c, &k) in counts.iter().enumerate() {
                if k > 0 {
                    total += BigRational::from_integer(BigInt::from(k)) * pow(p, c) * pow(&q, nb - c);
                }
            }
            (w, total)
        })
        .collect())
}

/// Floating-point version of [`exact_distribution`].
pub fn exact_distribution_f64(n: usize, p: f64) -> Result<BTreeMap<Permutation, f64>> {
    check_probability(p)?;
    let nb = num_boxes(n) as i32;
    let table = cross_count_table(n)?;
    Ok(table
        .into_iter()
        .map(|(w, counts)| {
            let s = counts.iter().enumerate().map(|(c, &k)| k as f64 * p.powi(c as i32) * (1.0 - p).powi(nb - c as i32)).sum();
            (w, s)
        })
        .collect())
}
