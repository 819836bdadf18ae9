//! Permutations in one-line notation, compositions, and 0-Hecke words.
//!
//! All public indices and values are 1-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    w: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Permutation(format!("{images:?} is not a bijection of 1..={n}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { w: images.into_iter().map(|v| v as u32).collect() })
    }

    /// Caller guarantees `w` is a bijection of `1..=w.len()`.
    pub(crate) fn from_raw(w: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(w.iter().map(|&v| v as usize).collect()).is_ok());
        Permutation { w }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { w: (1..=n as u32).collect() }
    }

    /// The longest element `w0(n) = n n-1 ... 1`.
    pub fn longest(n: usize) -> Self {
        Permutation { w: (1..=n as u32).rev().collect() }
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// `w_i` for `1 <= i <= n`.
    pub fn get(&self, i: usize) -> usize {
        self.w[i - 1] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.w
    }

    pub fn is_identity(&self) -> bool {
        self.w.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.n()];
        for (i, &v) in self.w.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation { w: inv }
    }

    /// `#{i < j : w_i > w_j}`, by a Fenwick tree in `O(n log n)`.
    pub fn inversions(&self) -> u64 {
        let n = self.n();
        let mut tree = vec![0u32; n + 1];
        let mut count = 0u64;
        for &v in self.w.iter().rev() {
            let mut i = v as usize - 1;
            while i > 0 {
                count += tree[i] as u64;
                i &= i - 1;
            }
            let mut i = v as usize;
            while i <= n {
                tree[i] += 1;
                i += i & i.wrapping_neg();
            }
        }
        count
    }

    /// `sum |i - w_i|`.
    pub fn displacement(&self) -> u64 {
        self.w.iter().enumerate().map(|(i, &v)| (i as i64 + 1 - v as i64).unsigned_abs()).sum()
    }

    /// `H(x, y) = #({w^{-1}(x), ..., w^{-1}(n)} ∩ {y, ..., n})`: entries of
    /// value at least `x` in positions at least `y`.
    pub fn height(&self, x: usize, y: usize) -> Result<usize> {
        let n = self.n();
        for v in [x, y] {
            if v == 0 || v > n {
                return Err(Error::Index { index: v, n });
            }
        }
        Ok(self.w[y - 1..].iter().filter(|&&v| v as usize >= x).count())
    }

    pub fn height_table(&self) -> HeightTable {
        HeightTable::new(self)
    }

    /// `u × w = (u_1, ..., u_k, w_1 + k, ..., w_m + k)`.
    pub fn cross_product(&self, other: &Permutation) -> Permutation {
        let k = self.n() as u32;
        let mut w = self.w.clone();
        w.extend(other.w.iter().map(|&v| v + k));
        Permutation { w }
    }

    /// A reduced word `r` with `demazure_product(r) = self`, found by bubble sort.
    pub fn reduced_word(&self) -> HeckeWord {
        let mut w = self.w.clone();
        let mut letters = Vec::new();
        loop {
            match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
                Some(i) => {
                    w.swap(i, i + 1);
                    letters.push(i + 1);
                }
                None => break,
            }
        }
        HeckeWord { letters, n: self.n() }
    }
}

impl fmt::Display for Permutation {
    /// Concatenated digits when `n <= 9`, space-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.w {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let s: Vec<String> = self.w.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", s.join(" "))
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parts: Vec<&str> = s.split(|c: char| c.is_whitespace() || c == ',' || c == '-').filter(|t| !t.is_empty()).collect();
        let images: Result<Vec<usize>> = if parts.len() == 1 && s.len() > 1 {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Permutation(s.to_string())))
                .collect()
        } else {
            parts.iter().map(|t| t.parse().map_err(|_| Error::Permutation(s.to_string()))).collect()
        };
        Permutation::new(images?)
    }
}

/// All heights `H(x, y)` at once, `O(n^2)` memory.
#[derive(Clone, Debug)]
pub struct HeightTable {
    n: usize,
    h: Vec<u32>,
}

impl HeightTable {
    pub fn new(w: &Permutation) -> Self {
        let n = w.n();
        let m = n + 2;
        let mut h = vec![0u32; m * m];
        for y in (1..=n).rev() {
            let v = w.get(y);
            for x in 1..=n {
                h[x * m + y] = h[x * m + y + 1] + (v >= x) as u32;
            }
        }
        HeightTable { n, h }
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.h[x * (self.n + 2) + y] as usize
    }
}

/// Composition `(b_l, ..., b_1)`; `parts[0]` is the first (top-left) block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&b| b == 0) {
            return Err(Error::Composition(format!("{parts:?} has a zero part")));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `w(b) = w0(b_l) × ... × w0(b_1)`.
    pub fn layered(&self) -> Permutation {
        let mut w = Vec::with_capacity(self.total());
        let mut offset = 0u32;
        for &b in &self.parts {
            w.extend((1..=b as u32).rev().map(|v| v + offset));
            offset += b as u32;
        }
        Permutation { w }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", s.join("-"))
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: std::result::Result<Vec<usize>, _> =
            s.split(|c: char| c == '-' || c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        Composition::new(parts.map_err(|e| Error::Composition(format!("{s}: {e}")))?)
    }
}

/// Word in the generators `s_1, ..., s_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeWord {
    letters: Vec<usize>,
    n: usize,
}

impl HeckeWord {
    pub fn new(letters: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&r| r == 0 || r >= n) {
            return Err(Error::Letter { letter: bad, n });
        }
        Ok(HeckeWord { letters, n })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// 0-Hecke product. Letters are applied right to left, each acting as
    /// `w <- w s_r` only when that lengthens `w`.
    pub fn demazure_product(&self) -> Permutation {
        let mut w: Vec<u32> = (1..=self.n as u32).collect();
        for &r in self.letters.iter().rev() {
            if w[r - 1] < w[r] {
                w.swap(r - 1, r);
            }
        }
        Permutation { w }
    }
}

pub fn demazure_product(word: &HeckeWord) -> Permutation {
    word.demazure_product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn statistics() {
        assert_eq!(p("241653").inversions(), 6);
        assert_eq!(p("241635").displacement(), 10);
        assert_eq!(p("21").displacement(), 2);
        assert_eq!(Permutation::longest(7).inversions(), 21);
        assert_eq!(Permutation::identity(9).inversions(), 0);
    }

    #[test]
    fn heights() {
        let w = p("241653");
        assert_eq!(w.height(4, 3).unwrap(), 2);
        assert_eq!(w.height(1, 1).unwrap(), 6);
        assert!(w.height(0, 1).is_err());
        assert!(w.height(1, 7).is_err());
        let id = Permutation::identity(5);
        for x in 1..=5 {
            for y in 1..=5 {
                assert_eq!(id.height(x, y).unwrap(), 5 - x.max(y) + 1);
            }
        }
        let t = w.height_table();
        for x in 1..=6 {
            for y in 1..=6 {
                assert_eq!(t.get(x, y), w.height(x, y).unwrap());
            }
        }
    }

    #[test]
    fn demazure_worked_example() {
        let word = HeckeWord::new(vec![5, 5, 3, 4, 1, 2, 4, 5, 4], 6).unwrap();
        assert_eq!(word.demazure_product(), p("316254"));
        assert!(HeckeWord::new(vec![], 4).unwrap().demazure_product().is_identity());
        for i in 1..5 {
            let a = HeckeWord::new(vec![i, i], 5).unwrap().demazure_product();
            let b = HeckeWord::new(vec![i], 5).unwrap().demazure_product();
            assert_eq!(a, b);
        }
        assert!(HeckeWord::new(vec![6], 6).is_err());
    }

    #[test]
    fn layered_and_cross() {
        assert_eq!(Composition::new(vec![1, 2]).unwrap().layered(), p("132"));
        assert_eq!(Composition::new(vec![1, 1, 1]).unwrap().layered(), Permutation::identity(3));
        assert_eq!(Composition::new(vec![4]).unwrap().layered(), Permutation::longest(4));
        assert_eq!(Permutation::identity(1).cross_product(&Permutation::longest(2)), p("132"));
        assert_eq!(Permutation::identity(2).cross_product(&Permutation::identity(3)), Permutation::identity(5));
        let b: Composition = "1-3-5-8-13".parse().unwrap();
        assert_eq!(b.total(), 30);
        assert_eq!(b.to_string(), "1-3-5-8-13");
        assert!(Composition::new(vec![1, 0]).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(p("10 2 3 4 5 6 7 8 9 1").get(1), 10);
        assert!("1 1".parse::<Permutation>().is_err());
        assert_eq!(p("3 1 2").to_string(), "312");
    }
}
