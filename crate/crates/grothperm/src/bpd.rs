//! Bumpless pipe dreams: domain-wall six-vertex configurations on the `n × n` square.
//!
//! Pipes enter along the bottom edge, pipe `j` in column `j`, and leave through the
//! right edge. Rows are numbered from the top. The permutation `w` sends a row `i` to
//! the label of the pipe leaving row `i`.
//!
//! Text legend, one character per tile:
//!
//! | char | tile       | edges |
//! |------|------------|-------|
//! | `r`  | SE bump    | S, E  |
//! | `J`  | NW bump    | W, N  |
//! | `+`  | cross      | all   |
//! | `.`  | empty      | none  |
//! | `-`  | horizontal | W, E  |
//! | `\|` | vertical   | S, N  |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::pipedream::{pow, sample_permutation};
use crate::stats::{ks_vs_cdf, mean_sd, normal_cdf, TestResult};

/// Default largest order for exhaustive enumeration.
pub const BPD_CAP: usize = 5;

/// A non-reduced dream of order 8 in which pipes 2 and 5 cross twice; `w = 45128637`.
pub const DOUBLE_CROSSING_EXAMPLE: &str = ".....r--
...r-Jr-
..r+--+-
.rJ|r-+-
rJr++-Jr
|rJ||r-+
||r+++-+
||||||r+
";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tile {
    SeBump,
    NwBump,
    Cross,
    Empty,
    Horizontal,
    Vertical,
}

impl Tile {
    pub const ALL: [Tile; 6] = [Tile::SeBump, Tile::NwBump, Tile::Cross, Tile::Empty, Tile::Horizontal, Tile::Vertical];

    /// Occupation of the (N, E, S, W) edges.
    pub fn edges(self) -> [bool; 4] {
        match self {
            Tile::SeBump => [false, true, true, false],
            Tile::NwBump => [true, false, false, true],
            Tile::Cross => [true; 4],
            Tile::Empty => [false; 4],
            Tile::Horizontal => [false, true, false, true],
            Tile::Vertical => [true, false, true, false],
        }
    }

    fn from_inputs(s: bool, w: bool, n: bool) -> Option<Tile> {
        Some(match (s, w, n) {
            (false, false, false) => Tile::Empty,
            (true, false, true) => Tile::Vertical,
            (true, false, false) => Tile::SeBump,
            (false, true, false) => Tile::Horizontal,
            (false, true, true) => Tile::NwBump,
            (true, true, true) => Tile::Cross,
            _ => return None,
        })
    }

    pub fn symbol(self) -> char {
        match self {
            Tile::SeBump => 'r',
            Tile::NwBump => 'J',
            Tile::Cross => '+',
            Tile::Empty => '.',
            Tile::Horizontal => '-',
            Tile::Vertical => '|',
        }
    }

    pub fn from_symbol(c: char) -> Option<Tile> {
        Tile::ALL.into_iter().find(|t| t.symbol() == c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BumplessPipeDream {
    n: usize,
    tiles: Vec<Tile>,
}

impl BumplessPipeDream {
    /// Validates edge continuity and the domain-wall boundary.
    pub fn new(n: usize, tiles: Vec<Tile>) -> Result<Self> {
        if tiles.len() != n * n {
            return Err(Error::Invalid(format!("{} tiles for order {n}", tiles.len())));
        }
        let d = BumplessPipeDream { n, tiles };
        for i in 1..=n {
            for j in 1..=n {
                let [nn, e, s, w] = d.tile(i, j).edges();
                let below = if i == n { true } else { d.tile(i + 1, j).edges()[0] };
                let above = if i == 1 { false } else { d.tile(i - 1, j).edges()[2] };
                let left = if j == 1 { false } else { d.tile(i, j - 1).edges()[1] };
                let right = if j == n { true } else { d.tile(i, j + 1).edges()[3] };
                if s != below || nn != above || w != left || e != right {
                    return Err(Error::Invalid(format!("tile ({i},{j}) breaks a pipe")));
                }
            }
        }
        Ok(d)
    }

    /// The reduced dream of `w`: an SE bump at `(i, w_i)`, pipes running down and right from it.
    pub fn rothe(w: &Permutation) -> Self {
        let n = w.n();
        let mut tiles = vec![Tile::Empty; n * n];
        for i in 1..=n {
            let c = w.get(i);
            tiles[(i - 1) * n + c - 1] = Tile::SeBump;
            for j in c + 1..=n {
                let t = &mut tiles[(i - 1) * n + j - 1];
                *t = if *t == Tile::Vertical { Tile::Cross } else { Tile::Horizontal };
            }
            for r in i + 1..=n {
                let t = &mut tiles[(r - 1) * n + c - 1];
                *t = if *t == Tile::Horizontal { Tile::Cross } else { Tile::Vertical };
            }
        }
        BumplessPipeDream { n, tiles }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Tile at row `i` (from the top), column `j`, both 1-based.
    pub fn tile(&self, i: usize, j: usize) -> Tile {
        self.tiles[(i - 1) * self.n + j - 1]
    }

    pub fn count(&self, t: Tile) -> usize {
        self.tiles.iter().filter(|&&x| x == t).count()
    }

    /// Sweeps rows bottom to top, columns left to right. At a cross tile with
    /// `a` entering from S and `b` from W, `resolve(a, b)` says whether they cross.
    fn sweep<F: FnMut(u32, u32) -> bool>(&self, mut resolve: F) -> Permutation {
        let n = self.n;
        let mut vert: Vec<u32> = (1..=n as u32).collect();
        let mut exits = vec![0u32; n];
        for i in (1..=n).rev() {
            let mut h = 0u32;
            for j in 1..=n {
                let s = vert[j - 1];
                let (up, right) = match self.tile(i, j) {
                    Tile::Empty => (0, 0),
                    Tile::Vertical => (s, 0),
                    Tile::SeBump => (0, s),
                    Tile::Horizontal => (0, h),
                    Tile::NwBump => (h, 0),
                    Tile::Cross => {
                        if resolve(s, h) {
                            (s, h)
                        } else {
                            (h, s)
                        }
                    }
                };
                vert[j - 1] = up;
                h = right;
            }
            exits[i - 1] = h;
        }
        Permutation::from_raw(exits)
    }

    /// `w(D)`: a pipe from the west crosses only a larger pipe from the south.
    pub fn permutation(&self) -> Permutation {
        self.sweep(|a, b| b < a)
    }

    /// `w(D)` by tracing with a table of already-crossed pairs.
    pub fn permutation_traced(&self) -> Permutation {
        let n = self.n;
        let mut seen = vec![false; (n + 1) * (n + 1)];
        self.sweep(|a, b| {
            let (lo, hi) = (a.min(b) as usize, a.max(b) as usize);
            let k = lo * (n + 1) + hi;
            if seen[k] {
                false
            } else {
                seen[k] = true;
                true
            }
        })
    }

    /// How many times each pair of physical pipes crosses; entry `[a][b]` for `a < b`.
    pub fn crossing_counts(&self) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut counts = vec![vec![0u32; n + 1]; n + 1];
        self.sweep(|a, b| {
            counts[a.min(b) as usize][a.max(b) as usize] += 1;
            true
        });
        counts
    }

    pub fn is_reduced(&self) -> bool {
        self.crossing_counts().iter().flatten().all(|&c| c <= 1)
    }
}

impl fmt::Display for BumplessPipeDream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.tiles.chunks(self.n) {
            let s: String = row.iter().map(|t| t.symbol()).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for BumplessPipeDream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let n = rows.len();
        let mut tiles = Vec::with_capacity(n * n);
        for (k, row) in rows.iter().enumerate() {
            let parsed: Option<Vec<Tile>> = row.chars().map(Tile::from_symbol).collect();
            let parsed = parsed.ok_or_else(|| Error::Parse { line: k + 1, msg: format!("unknown tile in {row:?}") })?;
            if parsed.len() != n {
                return Err(Error::Parse { line: k + 1, msg: format!("expected {n} tiles, found {}", parsed.len()) });
            }
            tiles.extend(parsed);
        }
        BumplessPipeDream::new(n, tiles)
    }
}

/// Calls `visit` on every bumpless pipe dream of order `n <= cap`, built row by
/// row from the bottom. Returning `false` from `visit` stops the search.
pub fn visit_bpd<F: FnMut(&BumplessPipeDream) -> bool>(n: usize, cap: usize, mut visit: F) -> Result<()> {
    if n > cap {
        return Err(Error::Cap { n, cap });
    }
    let mut d = BumplessPipeDream { n, tiles: vec![Tile::Empty; n * n] };
    let mut south = vec![true; n];
    fill(&mut d, n, 1, &mut south, false, &mut visit);
    Ok(())
}

/// Every bumpless pipe dream of order `n <= cap`.
pub fn enumerate_bpd_capped(n: usize, cap: usize) -> Result<Vec<BumplessPipeDream>> {
    let mut out = Vec::new();
    visit_bpd(n, cap, |d| {
        out.push(d.clone());
        true
    })?;
    Ok(out)
}

pub fn enumerate_bpd(n: usize) -> Result<Vec<BumplessPipeDream>> {
    enumerate_bpd_capped(n, BPD_CAP)
}

fn fill<F: FnMut(&BumplessPipeDream) -> bool>(d: &mut BumplessPipeDream, i: usize, j: usize, south: &mut [bool], west: bool, visit: &mut F) -> bool {
    let n = d.n;
    if i == 0 {
        return if south.iter().all(|&b| !b) { visit(d) } else { true };
    }
    if j > n {
        // Each row sends exactly one pipe out to the right, so at most i - 1
        // vertical pipes may continue upward.
        if west && south.iter().filter(|&&b| b).count() < i {
            return fill(d, i - 1, 1, south, false, visit);
        }
        return true;
    }
    let s = south[j - 1];
    for up in [false, true] {
        let Some(t) = Tile::from_inputs(s, west, up) else { continue };
        d.tiles[(i - 1) * n + j - 1] = t;
        south[j - 1] = up;
        let go_on = fill(d, i, j + 1, south, t.edges()[1], visit);
        south[j - 1] = s;
        if !go_on {
            return false;
        }
    }
    true
}

/// `Υ_w(β) = Σ_{D ∈ BPD(w)} β^{#empty - ℓ(w)} (1+β)^{#NW bump}`.
pub fn upsilon_via_bpd(w: &Permutation, beta: &BigRational) -> Result<BigRational> {
    let len = w.inversions() as usize;
    let mut total = BigRational::zero();
    for d in enumerate_bpd(w.n())? {
        if d.permutation() == *w {
            let e = d.count(Tile::Empty);
            assert!(e >= len, "a dream of w has at least ℓ(w) empty tiles");
            total += pow(beta, e - len) * pow(&(BigRational::one() + beta), d.count(Tile::NwBump));
        }
    }
    Ok(total)
}

/// Law of `w(D)` when `D` is drawn with probability `2^{-C(n,2)} 2^{#NW bump}`.
pub fn two_asm_law(n: usize) -> Result<BTreeMap<Permutation, BigRational>> {
    let norm = BigInt::one() << (n * n.saturating_sub(1) / 2);
    let mut law = BTreeMap::new();
    for d in enumerate_bpd(n)? {
        let m = BigRational::new(BigInt::one() << d.count(Tile::NwBump), norm.clone());
        *law.entry(d.permutation()).or_insert_with(BigRational::zero) += m;
    }
    Ok(law)
}

/// Outcome of the central limit check for `w_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CltReport {
    pub ks: TestResult,
    pub mean: f64,
    pub sd: f64,
}

/// Standardized images `(w_n - n/2) / sqrt(n/4)` for `p = 1/2` permutations.
pub fn clt_samples(n: usize, samples: u64, seed: u64) -> Result<Vec<f64>> {
    let half = n as f64 / 2.0;
    let scale = (n as f64 / 4.0).sqrt();
    crate::mc::run(seed, samples, |_, rng| {
        let w = sample_permutation(n, 0.5, rng)?;
        Ok((w.get(n) as f64 - half) / scale)
    })
}

pub fn clt_experiment(n: usize, samples: u64, seed: u64) -> Result<CltReport> {
    let xs = clt_samples(n, samples, seed)?;
    let (mean, sd) = mean_sd(&xs)?;
    Ok(CltReport { ks: ks_vs_cdf(&xs, normal_cdf)?, mean, sd })
}

/// One `p = 1/2` draw through the pipe-dream route, which has the 2-ASM law.
pub fn sample_two_asm_permutation<R: RngCore>(n: usize, rng: &mut R) -> Result<Permutation> {
    sample_permutation(n, 0.5, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let c: Vec<usize> = (1..=5).map(|n| enumerate_bpd(n).unwrap().len()).collect();
        assert_eq!(c, [1, 2, 7, 42, 429]);
        assert!(enumerate_bpd(6).is_err());
        assert_eq!(enumerate_bpd_capped(6, 6).unwrap().len(), 7436);
    }

    #[test]
    fn rothe_round_trip() {
        for d in enumerate_bpd(4).unwrap() {
            let w = d.permutation();
            let r = BumplessPipeDream::rothe(&w);
            assert_eq!(r.permutation(), w);
            assert_eq!(r.count(Tile::Empty), w.inversions() as usize);
            assert!(r.is_reduced());
            assert_eq!(BumplessPipeDream::new(4, r.tiles.clone()).unwrap(), r);
        }
    }

    #[test]
    fn text_round_trip() {
        let d = BumplessPipeDream::rothe(&"3142".parse().unwrap());
        let s = d.to_string();
        assert_eq!(s.parse::<BumplessPipeDream>().unwrap(), d);
        assert!("r|\n-r\n".parse::<BumplessPipeDream>().is_err());
    }

    #[test]
    fn identity_configuration() {
        let d = BumplessPipeDream::rothe(&Permutation::identity(3));
        assert_eq!(d.to_string(), "r--\n|r-\n||r\n");
        assert_eq!(d.permutation(), Permutation::identity(3));
    }
}
