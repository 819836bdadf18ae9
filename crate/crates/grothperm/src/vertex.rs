//! Colored stochastic six-vertex model on the staircase.
//!
//! A vertex sees colors `a` (bottom) and `b` (left) and emits `c` (top) and
//! `d` (right). Color 0 means no pipe. Larger colors from the left always
//! turn up; a larger color from below goes up with probability `p` and
//! turns right otherwise. Boxes are swept along anti-diagonals `τ = j - i`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::pipedream::PipeDream;
use crate::rng::Coin;

/// `w_p(a, b; c, d)`.
pub fn weight(p: f64, a: usize, b: usize, c: usize, d: usize) -> f64 {
    match outcome(a, b, c, d) {
        Outcome::Certain => 1.0,
        Outcome::Up => p,
        Outcome::Turn => 1.0 - p,
        Outcome::Forbidden => 0.0,
    }
}

pub fn weight_exact(p: &BigRational, a: usize, b: usize, c: usize, d: usize) -> BigRational {
    match outcome(a, b, c, d) {
        Outcome::Certain => BigRational::one(),
        Outcome::Up => p.clone(),
        Outcome::Turn => BigRational::one() - p,
        Outcome::Forbidden => BigRational::zero(),
    }
}

enum Outcome {
    Certain,
    Up,
    Turn,
    Forbidden,
}

fn outcome(a: usize, b: usize, c: usize, d: usize) -> Outcome {
    if a == b {
        if c == a && d == a {
            Outcome::Certain
        } else {
            Outcome::Forbidden
        }
    } else if a < b {
        if c == b && d == a {
            Outcome::Certain
        } else {
            Outcome::Forbidden
        }
    } else if c == a && d == b {
        Outcome::Up
    } else if c == b && d == a {
        Outcome::Turn
    } else {
        Outcome::Forbidden
    }
}

/// Boxes of the staircase in sweep order: `τ` increasing, then `i` increasing.
pub fn diagonal_order(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(crate::pipedream::num_boxes(n));
    let t = n as i64 - 2;
    for tau in -t..=t {
        let lo = (1 - tau).max(1) as usize;
        for i in lo.. {
            let j = (i as i64 + tau) as usize;
            if i + j > n {
                break;
            }
            out.push((i, j));
        }
    }
    out
}

/// Frontier of the sweep: the color on each row's rightmost processed edge
/// and each column's topmost processed edge.
#[derive(Clone, Debug)]
pub struct SweepState {
    pub n: usize,
    pub horiz: Vec<u32>,
    pub vert: Vec<u32>,
}

/// One processed vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexRecord {
    pub i: usize,
    pub j: usize,
    pub bottom: u32,
    pub left: u32,
    pub top: u32,
    pub right: u32,
}

impl SweepState {
    /// Rainbow boundary: pipe `i` enters row `i`, restricted to colors `>= x`.
    pub fn new(n: usize, min_color: u32) -> Self {
        let horiz = (0..=n as u32).map(|c| if c >= min_color { c } else { 0 }).collect();
        SweepState { n, horiz, vert: vec![0; n + 1] }
    }

    #[inline]
    pub fn inputs(&self, i: usize, j: usize) -> (u32, u32) {
        let a = if i + j == self.n { self.horiz[i + 1] } else { self.vert[j] };
        (a, self.horiz[i])
    }

    #[inline]
    pub fn set_outputs(&mut self, i: usize, j: usize, top: u32, right: u32) {
        self.vert[j] = top;
        self.horiz[i] = right;
    }

    /// Colors leaving the top boundary, columns `1..=n`.
    pub fn exits(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.vert[1..self.n].to_vec();
        w.push(self.horiz[1]);
        w
    }
}

fn sweep<R: RngCore, F: FnMut(VertexRecord)>(n: usize, p: f64, min_color: u32, rng: &mut R, mut record: F) -> Result<Vec<u32>> {
    let mut coin = Coin::new(p)?;
    let mut s = SweepState::new(n, min_color);
    let t = n as i64 - 2;
    for tau in -t..=t {
        let lo = (1 - tau).max(1) as usize;
        for i in lo.. {
            let j = (i as i64 + tau) as usize;
            if i + j > n {
                break;
            }
            let (a, b) = s.inputs(i, j);
            let up = a > b && coin.flip(rng);
            let (top, right) = if up { (a, b) } else { (b, a) };
            s.set_outputs(i, j, top, right);
            record(VertexRecord { i, j, bottom: a, left: b, top, right });
        }
    }
    Ok(s.exits())
}

/// Grothendieck permutation from the colored sweep.
pub fn sample_colored<R: RngCore>(n: usize, p: f64, rng: &mut R) -> Result<Permutation> {
    let w = sweep(n, p, 1, rng, |v| debug_assert!(v.bottom != 0 && v.left != 0))?;
    Ok(Permutation::from_raw(w))
}

/// Colored sweep keeping every vertex; the pipe dream has a cross wherever
/// the bottom color went straight up.
pub fn sample_colored_traced<R: RngCore>(n: usize, p: f64, rng: &mut R) -> Result<(Permutation, PipeDream, Vec<VertexRecord>)> {
    let mut records = Vec::with_capacity(crate::pipedream::num_boxes(n));
    let w = sweep(n, p, 1, rng, |v| records.push(v))?;
    let mut d = PipeDream::new(n);
    for v in &records {
        if v.top == v.bottom && v.top != v.left {
            d.set(v.i, v.j, true);
        }
    }
    Ok((Permutation::from_raw(w), d, records))
}

/// Color-blind sweep keeping only pipes of colors `>= x`. Returns the
/// sorted exit columns of the `n - x + 1` surviving pipes.
pub fn sample_color_blind<R: RngCore>(n: usize, p: f64, x: usize, rng: &mut R) -> Result<Vec<usize>> {
    if x == 0 || x > n {
        return Err(Error::Index { index: x, n });
    }
    let mut coin = Coin::new(p)?;
    let mut horiz: Vec<u8> = (0..=n).map(|c| (c >= x) as u8).collect();
    let mut vert = vec![0u8; n + 1];
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
            let up = a > b && coin.flip(rng);
            if up {
                vert[j] = a;
            } else {
                vert[j] = b;
                horiz[i] = a;
            }
        }
    }
    let mut exits: Vec<usize> = (1..n).filter(|&j| vert[j] == 1).collect();
    if horiz[1] == 1 {
        exits.push(n);
    }
    Ok(exits)
}

/// Exact law of the colored sweep by branching on every random vertex.
pub fn exact_law(n: usize, p: &BigRational) -> Result<BTreeMap<Permutation, BigRational>> {
    if n > 6 {
        return Err(Error::Cap { n, cap: 6 });
    }
    let order = diagonal_order(n);
    let mut law = BTreeMap::new();
    let state = SweepState::new(n, 1);
    branch(&order, 0, state, BigRational::one(), p, &mut law);
    Ok(law)
}

fn branch(order: &[(usize, usize)], k: usize, mut s: SweepState, mass: BigRational, p: &BigRational, law: &mut BTreeMap<Permutation, BigRational>) {
    let mut k = k;
    while k < order.len() {
        let (i, j) = order[k];
        let (a, b) = s.inputs(i, j);
        if a > b {
            let mut up = s.clone();
            up.set_outputs(i, j, a, b);
            branch(order, k + 1, up, &mass * weight_exact(p, a as usize, b as usize, a as usize, b as usize), p, law);
            s.set_outputs(i, j, b, a);
            let turn = weight_exact(p, a as usize, b as usize, b as usize, a as usize);
            return branch(order, k + 1, s, mass * turn, p, law);
        }
        s.set_outputs(i, j, b, a);
        k += 1;
    }
    *law.entry(Permutation::from_raw(s.exits())).or_insert_with(BigRational::zero) += mass;
}
