//! Discrete-time parallel TASEP with geometric jumps.
//!
//! Particles `ξ_1 > ξ_2 > ... > ξ_k` update simultaneously:
//! `ξ_i(t+1) = ξ_i(t) + min(G_i, ξ_{i-1}(t) - ξ_i(t) - 1)` with `ξ_0 = +∞` and
//! `P(G = m) = (1 - p) p^m`. Every active particle consumes exactly one
//! geometric draw per step, blocked or not.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::rng::Geometric;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TasepState {
    positions: Vec<i64>,
    t: u64,
}

impl TasepState {
    pub fn new(positions: Vec<i64>) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid(format!("positions {positions:?} are not strictly decreasing")));
        }
        Ok(TasepState { positions, t: 0 })
    }

    /// Step initial data `ξ_i(0) = k + 1 - i`.
    pub fn step_initial(k: usize) -> Self {
        TasepState { positions: (1..=k as i64).rev().collect(), t: 0 }
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    /// Apply given jumps `g_i`; returns the realized displacements.
    pub fn step_with_jumps(&mut self, g: &[u64]) -> Vec<i64> {
        assert_eq!(g.len(), self.positions.len());
        let mut moved = Vec::with_capacity(g.len());
        let mut ahead = i64::MAX;
        for (x, &gi) in self.positions.iter_mut().zip(g) {
            let old = *x;
            let room = if ahead == i64::MAX { i64::MAX } else { ahead - old - 1 };
            let d = (gi.min(i64::MAX as u64) as i64).min(room);
            *x += d;
            moved.push(d);
            ahead = old;
        }
        self.t += 1;
        debug_assert!(self.positions.windows(2).all(|w| w[0] > w[1]));
        moved
    }

    pub fn step<R: RngCore>(&mut self, geo: &Geometric, rng: &mut R) -> Vec<i64> {
        let g: Vec<u64> = (0..self.positions.len()).map(|_| geo.draw(rng)).collect();
        self.step_with_jumps(&g)
    }
}

/// Exit times `T(i) = min{t : ξ_i(t) >= n + 1 - t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitRecord {
    pub exit_times: Vec<u64>,
}

impl ExitRecord {
    /// `#{i : T(i) <= t}`.
    pub fn exited_by(&self, t: u64) -> usize {
        self.exit_times.partition_point(|&e| e <= t)
    }
}

/// TASEP against a wall at `n + 1 - t`. Exited particles freeze in place
/// and stop drawing; the run stops at `t_max` or when all have exited.
pub struct WallRun {
    n: i64,
    state: TasepState,
    exit_times: Vec<u64>,
    active_from: usize,
}

impl WallRun {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Invalid(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        Ok(WallRun { n: n as i64, state: TasepState::step_initial(k), exit_times: vec![0; k], active_from: 0 })
    }

    pub fn state(&self) -> &TasepState {
        &self.state
    }

    pub fn done(&self) -> bool {
        self.active_from == self.exit_times.len()
    }

    /// One step; `jump()` is called once per active particle, front to back.
    pub fn step_by<F: FnMut() -> u64>(&mut self, mut jump: F) {
        let t = self.state.t + 1;
        let pos = &mut self.state.positions;
        let mut ahead = if self.active_from == 0 { i64::MAX } else { pos[self.active_from - 1] };
        for x in &mut pos[self.active_from..] {
            let old = *x;
            let g = jump();
            let room = if ahead == i64::MAX { i64::MAX } else { ahead - old - 1 };
            *x += (g.min(i64::MAX as u64) as i64).min(room);
            ahead = old;
        }
        self.state.t = t;
        let wall = self.n + 1 - t as i64;
        while self.active_from < pos.len() && pos[self.active_from] >= wall {
            self.exit_times[self.active_from] = t;
            self.active_from += 1;
        }
        debug_assert!(pos.windows(2).all(|w| w[0] > w[1]), "exclusion violated");
    }

    pub fn record(self) -> ExitRecord {
        assert!(self.done(), "run has particles left");
        let rec = ExitRecord { exit_times: self.exit_times };
        assert!(rec.exit_times.windows(2).all(|w| w[0] < w[1]), "exit times out of order");
        rec
    }
}

pub fn run_with_exit_boundary<R: RngCore>(k: usize, n: usize, p: f64, rng: &mut R) -> Result<ExitRecord> {
    let geo = Geometric::new(p)?;
    let mut run = WallRun::new(k, n)?;
    while !run.done() {
        run.step_by(|| geo.draw(rng));
    }
    let rec = run.record();
    assert!(rec.exit_times[0] >= 1 && *rec.exit_times.last().unwrap() <= n as u64);
    Ok(rec)
}

/// Positions at every time until all particles exit, plus the exit record.
pub fn trajectory<R: RngCore>(k: usize, n: usize, p: f64, rng: &mut R) -> Result<(Vec<Vec<i64>>, ExitRecord)> {
    let geo = Geometric::new(p)?;
    let mut run = WallRun::new(k, n)?;
    let mut path = vec![run.state().positions().to_vec()];
    while !run.done() {
        run.step_by(|| geo.draw(rng));
        path.push(run.state().positions().to_vec());
    }
    Ok((path, run.record()))
}

/// One sample of `H(x, y)` for the order-`n` Grothendieck permutation via
/// `H = k - #{i : T(i) <= y - 1}` with `k = n - x + 1`.
pub fn height_via_tasep<R: RngCore>(n: usize, x: usize, y: usize, geo: &Geometric, rng: &mut R) -> Result<usize> {
    if x == 0 || x > n || y == 0 || y > n {
        return Err(Error::Index { index: x.max(y), n });
    }
    let k = n - x + 1;
    let mut run = WallRun::new(k, n)?;
    for _ in 0..y - 1 {
        if run.done() {
            break;
        }
        run.step_by(|| geo.draw(rng));
    }
    Ok(k - run.active_from)
}

/// Monte Carlo estimate of `P(H(x, y) <= h)` from `samples` TASEP runs.
pub fn height_cdf_via_tasep(n: usize, x: usize, y: usize, h: usize, p: f64, samples: u64, seed: u64) -> Result<f64> {
    let geo = Geometric::new(p)?;
    if h >= n - x + 1 {
        return Ok(1.0);
    }
    let hits = crate::mc::run(seed, samples, |_, rng| height_via_tasep(n, x, y, &geo, rng).map(|v| (v <= h) as u64))?;
    Ok(hits.into_iter().sum::<u64>() as f64 / samples as f64)
}

fn rpow(p: &BigRational, e: i64) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * p)
}

/// Exact law of `H(x, y)` from the TASEP with exit boundary, indexed by `h`.
/// Landings at or past the wall are lumped into one exit outcome; a frozen
/// particle can only block a follower at a position that exits anyway.
pub fn exact_height_law(n: usize, x: usize, y: usize, p: &BigRational) -> Result<Vec<BigRational>> {
    if x == 0 || x > n || y == 0 || y > n {
        return Err(Error::Index { index: x.max(y), n });
    }
    if p.is_negative() || *p >= BigRational::one() {
        return Err(Error::Invalid(format!("exact TASEP needs 0 <= p < 1, got {p}")));
    }
    let k = n - x + 1;
    let q = BigRational::one() - p;
    let mut states: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    states.insert((1..=k as i64).rev().collect(), BigRational::one());
    for t in 1..y as i64 {
        let wall = n as i64 + 1 - t;
        let mut next = BTreeMap::new();
        for (pos, pr) in states {
            let mut partial = vec![(Vec::with_capacity(pos.len()), pr)];
            for (i, &old) in pos.iter().enumerate() {
                let cap = if i == 0 { i64::MAX } else { pos[i - 1] - 1 };
                let mut grown = Vec::new();
                for (landed, pr) in partial {
                    let mut push = |to: i64, w: BigRational| {
                        let mut l = landed.clone();
                        l.push(to);
                        grown.push((l, &pr * w));
                    };
                    for d in 0.. {
                        let to = old + d;
                        if to >= wall {
                            push(wall, rpow(p, d));
                            break;
                        }
                        if to == cap {
                            push(to, rpow(p, d));
                            break;
                        }
                        push(to, &q * rpow(p, d));
                    }
                }
                partial = grown;
            }
            for (landed, pr) in partial {
                let active: Vec<i64> = landed.into_iter().filter(|&v| v < wall).collect();
                *next.entry(active).or_insert_with(BigRational::zero) += pr;
            }
        }
        states = next;
    }
    let mut law = vec![BigRational::zero(); k + 1];
    for (pos, pr) in states {
        law[pos.len()] += pr;
    }
    Ok(law)
}

/// `ξ̄_m(t) = ξ_m(t) - ξ_m(0)` from step initial data; only the first `m` particles matter.
pub fn displacement<R: RngCore>(m: usize, t: usize, geo: &Geometric, rng: &mut R) -> Result<u64> {
    if m == 0 {
        return Err(Error::Invalid("need at least one particle".into()));
    }
    let mut s = TasepState::step_initial(m);
    for _ in 0..t {
        s.step(geo, rng);
    }
    Ok((s.positions()[m - 1] - 1) as u64)
}

/// Empirical law of `ξ̄_m(t)`.
pub fn displacement_law(m: usize, t: usize, p: f64, samples: u64, seed: u64) -> Result<BTreeMap<usize, f64>> {
    let geo = Geometric::new(p)?;
    let draws = crate::mc::run(seed, samples, |_, rng| displacement(m, t, &geo, rng))?;
    let mut law = BTreeMap::new();
    for d in draws {
        *law.entry(d as usize).or_insert(0.0) += 1.0 / samples as f64;
    }
    Ok(law)
}

/// Parameters of the Schur measure with `a = 1^m`, `b = p^t`.
#[derive(Clone, Copy, Debug)]
pub struct SchurSpec {
    pub m: usize,
    pub t: usize,
    pub p: f64,
    pub tail_mass_cutoff: f64,
}

impl SchurSpec {
    pub fn new(m: usize, t: usize, p: f64) -> Self {
        SchurSpec { m, t, p, tail_mass_cutoff: 1e-8 }
    }
}

/// `s_λ(1^m) = Π_{i<j<=m} (λ_i - λ_j + j - i) / (j - i)`.
pub fn schur_ones(lambda: &[usize], m: usize) -> f64 {
    if lambda.len() > m {
        return 0.0;
    }
    let part = |i: usize| lambda.get(i).copied().unwrap_or(0) as f64;
    let mut s = 1.0;
    for i in 0..m {
        for j in i + 1..m {
            s *= (part(i) - part(j) + (j - i) as f64) / (j - i) as f64;
        }
    }
    s
}

/// Partitions of `size` with at most `parts` parts, largest part first.
pub fn partitions(size: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for first in (1..=max.min(rest)).rev() {
            cur.push(first);
            go(rest - first, first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(size, size, parts, &mut Vec::new(), &mut out);
    out
}

/// Law of `λ_m` under `P(λ) = (1-p)^{mt} s_λ(1^m) s_λ(p^t)`.
pub fn schur_marginal_lastpart(spec: &SchurSpec) -> Result<BTreeMap<usize, f64>> {
    let SchurSpec { m, t, p, tail_mass_cutoff } = *spec;
    if m == 0 || t == 0 || !(0.0..1.0).contains(&p) {
        return Err(Error::Invalid(format!("bad Schur parameters m={m}, t={t}, p={p}")));
    }
    let r = m.min(t);
    let norm = (1.0 - p).powf((m * t) as f64);
    let mut law = BTreeMap::new();
    let mut total = 0.0;
    for size in 0.. {
        if size > 5000 {
            return Err(Error::Invalid(format!("tail mass {} not reached", 1.0 - total)));
        }
        for lam in partitions(size, r) {
            let wgt = norm * schur_ones(&lam, m) * schur_ones(&lam, t) * p.powi(size as i32);
            *law.entry(lam.get(m - 1).copied().unwrap_or(0)).or_insert(0.0) += wgt;
            total += wgt;
        }
        if 1.0 - total < tail_mass_cutoff {
            break;
        }
    }
    Ok(law)
}

/// `c(m, t)`: hydrodynamic displacement per unit of `L`.
pub fn lln_constant(m: f64, t: f64, p: f64) -> f64 {
    if t <= m / p {
        0.0
    } else {
        ((p * t).sqrt() - m.sqrt()).powi(2) / (1.0 - p)
    }
}

/// `(c, v1, v2)`; the fluctuation scales exist only for `t > m / p`.
pub fn limit_constants(m: f64, t: f64, p: f64) -> Result<(f64, f64, f64)> {
    if !(m > 0.0 && t > 0.0 && p > 0.0 && p < 1.0) {
        return Err(Error::Invalid(format!("need m, t > 0 and 0 < p < 1, got m={m}, t={t}, p={p}")));
    }
    if t <= m / p {
        return Err(Error::Domain { x: m, y: t, why: "fluctuation constants need t > m/p" });
    }
    let a = (t / p).sqrt() - m.sqrt();
    let b = (p * t).sqrt() - m.sqrt();
    let v1 = p.sqrt() * m.cbrt() / t.powf(1.0 / 6.0) * a.powf(2.0 / 3.0) / b.cbrt();
    let v2 = p.sqrt() * b.powf(2.0 / 3.0) * a.powf(2.0 / 3.0) / ((m * t).powf(1.0 / 6.0) * (1.0 - p));
    Ok((lln_constant(m, t, p), v1, v2))
}

/// Closed form of `1/v1 + 1/v2`.
pub fn inverse_scale_sum(m: f64, t: f64, p: f64) -> f64 {
    (t.sqrt() - (m * p).sqrt()) * t.powf(1.0 / 6.0)
        / (m.cbrt() * ((t / p).sqrt() - m.sqrt()).powf(2.0 / 3.0) * ((t * p).sqrt() - m.sqrt()).powf(2.0 / 3.0))
}

/// Critical point `z_cr = (√(pt) - √m) / (√(t/p) - √m)` of the asymptotic analysis.
pub fn critical_z(m: f64, t: f64, p: f64) -> f64 {
    ((p * t).sqrt() - m.sqrt()) / ((t / p).sqrt() - m.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocked_particles_stay() {
        let mut s = TasepState::new(vec![8, 3, 2, 0]).unwrap();
        let moved = s.step_with_jumps(&[0, 3, 1, 2]);
        assert_eq!(moved, vec![0, 3, 0, 1]);
        assert_eq!(s.positions(), &[8, 6, 2, 1]);
        assert!(TasepState::new(vec![1, 1]).is_err());
    }

    #[test]
    fn partitions_count() {
        assert_eq!(partitions(5, 5).len(), 7);
        assert_eq!(partitions(5, 2).len(), 3);
        assert_eq!(partitions(0, 3), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn schur_ones_values() {
        assert_eq!(schur_ones(&[1], 4), 4.0);
        assert_eq!(schur_ones(&[2], 3), 6.0);
        assert_eq!(schur_ones(&[1, 1], 3), 3.0);
        assert_eq!(schur_ones(&[1, 1, 1], 2), 0.0);
    }

    #[test]
    fn constants() {
        let (c, _, _) = limit_constants(1.0, 5.0, 0.5).unwrap();
        assert!((c - 0.6754).abs() < 1e-3);
        assert!((critical_z(1.0, 5.0, 0.5) - 0.2687).abs() < 1e-3);
        assert_eq!(lln_constant(1.0, 2.0, 0.5), 0.0);
        assert!(limit_constants(1.0, 2.0, 0.5).is_err());
    }
}
