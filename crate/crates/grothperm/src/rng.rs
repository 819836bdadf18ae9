//! Per-sample random streams and the two discrete draws used by the samplers.
//!
//! Every Monte Carlo sample `i` under master seed `s` gets its own generator,
//! keyed by ChaCha8 with key `s` on stream `i`. The first 256 bits of that
//! stream seed a Xoshiro256++ generator that does the bulk work. Samples are
//! therefore independent of how work is scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{check_probability, Error, Result};

pub type SampleRng = Xoshiro256PlusPlus;

/// Generator for sample `index` under master `seed`.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    let mut key = ChaCha8Rng::seed_from_u64(seed);
    key.set_stream(index);
    let mut s = [0u8; 32];
    key.fill_bytes(&mut s);
    Xoshiro256PlusPlus::from_seed(s)
}

/// Bernoulli(p) coin. At p = 1/2 it spends one bit per flip, otherwise one
/// 64-bit word compared against `p * 2^64`.
#[derive(Clone, Debug)]
pub struct Coin {
    kind: CoinKind,
    buf: u64,
    left: u32,
}

#[derive(Clone, Copy, Debug)]
enum CoinKind {
    Never,
    Always,
    Half,
    Threshold(u64),
}

impl Coin {
    pub fn new(p: f64) -> Result<Self> {
        check_probability(p)?;
        let kind = if p == 0.0 {
            CoinKind::Never
        } else if p == 1.0 {
            CoinKind::Always
        } else if p == 0.5 {
            CoinKind::Half
        } else {
            CoinKind::Threshold((p * 2f64.powi(64)) as u64)
        };
        Ok(Coin { kind, buf: 0, left: 0 })
    }

    #[inline(always)]
    pub fn flip<R: RngCore>(&mut self, rng: &mut R) -> bool {
        match self.kind {
            CoinKind::Never => false,
            CoinKind::Always => true,
            CoinKind::Half => {
                if self.left == 0 {
                    self.buf = rng.next_u64();
                    self.left = 64;
                }
                let b = self.buf & 1 == 1;
                self.buf >>= 1;
                self.left -= 1;
                b
            }
            CoinKind::Threshold(t) => rng.next_u64() < t,
        }
    }
}

/// Geometric law `P(G = m) = (1 - p) p^m`, sampled by inverting the tail
/// `P(G >= m) = p^m` against one 64-bit uniform word.
#[derive(Clone, Debug)]
pub struct Geometric {
    tail: Vec<u64>,
    linear: bool,
}

impl Geometric {
    pub fn new(p: f64) -> Result<Self> {
        check_probability(p)?;
        if p == 1.0 {
            return Err(Error::Invalid("geometric law needs p < 1".into()));
        }
        let mut tail = Vec::new();
        let mut pm = p;
        loop {
            let t = pm * 2f64.powi(64);
            if t < 1.0 {
                break;
            }
            tail.push(if t >= 2f64.powi(64) { u64::MAX } else { t as u64 });
            pm *= p;
        }
        Ok(Geometric { tail, linear: p <= 0.75 })
    }

    #[inline]
    pub fn draw<R: RngCore>(&self, rng: &mut R) -> u64 {
        let u = rng.next_u64();
        if self.linear {
            let mut m = 0;
            while m < self.tail.len() && u < self.tail[m] {
                m += 1;
            }
            m as u64
        } else {
            self.tail.partition_point(|&t| u < t) as u64
        }
    }
}
