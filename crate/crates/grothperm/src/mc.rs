//! Reproducible Monte Carlo over sample indices.
//!
//! Sample `i` always draws from `rng::stream(seed, i)`, and results are
//! returned (or folded) in index order, so output does not depend on the
//! number of worker threads.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::Result;
use crate::rng::{stream, SampleRng};

/// Environment variable holding the worker-thread budget.
pub const THREADS_ENV: &str = "GROTHPERM_THREADS";

static BUDGET: AtomicUsize = AtomicUsize::new(0);

/// Override the thread budget; 0 restores the default.
pub fn set_thread_budget(threads: usize) {
    BUDGET.store(threads, Ordering::SeqCst);
}

/// Explicit budget, else `GROTHPERM_THREADS`, else available parallelism.
pub fn thread_budget() -> usize {
    match BUDGET.load(Ordering::SeqCst) {
        0 => std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&t| t > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        t => t,
    }
}

const CHUNK: u64 = 256;

/// Evaluate `f(i, rng_i)` for `i in 0..samples`, in index order.
pub fn run<T, F>(seed: u64, samples: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut SampleRng) -> Result<T> + Sync,
{
    let one = |i: u64| f(i, &mut stream(seed, i));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let threads = thread_budget();
        if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
            return pool.install(|| (0..samples).into_par_iter().map(one).collect());
        }
    }
    (0..samples).map(one).collect()
}

/// Fold samples into per-chunk accumulators and merge them in chunk order.
pub fn fold<A, F, M>(seed: u64, samples: u64, init: impl Fn() -> A + Sync, f: F, merge: M) -> Result<A>
where
    A: Send,
    F: Fn(&mut A, u64, &mut SampleRng) -> Result<()> + Sync,
    M: Fn(&mut A, A),
{
    let chunks = samples.div_ceil(CHUNK);
    let parts = run(seed, chunks, |c, _| {
        let mut acc = init();
        for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
            f(&mut acc, i, &mut stream(seed, i))?;
        }
        Ok(acc)
    })?;
    let mut total = init();
    for part in parts {
        merge(&mut total, part);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn thread_count_does_not_matter() {
        let go = || run(11, 1000, |i, rng| Ok(rng.next_u64() ^ i)).unwrap();
        set_thread_budget(1);
        let a = go();
        set_thread_budget(4);
        let b = go();
        set_thread_budget(0);
        assert_eq!(a, b);
        let s = fold(3, 1000, || 0u64, |acc, _, rng| {
            *acc = acc.wrapping_add(rng.next_u64());
            Ok(())
        }, |a, b| *a = a.wrapping_add(b))
        .unwrap();
        let t: u64 = run(3, 1000, |_, rng| Ok(rng.next_u64())).unwrap().into_iter().fold(0, |a, b| a.wrapping_add(b));
        assert_eq!(s, t);
    }
}
