//! Grothendieck random permutations.
//!
//! A Bernoulli(p) pipe dream on the staircase, reduced so that no two pipes
//! cross twice, gives a random permutation whose law is proportional to the
//! principal specialization of the β = 1 Grothendieck polynomial. This crate
//! samples it three ways (pipe-dream reduction, a colored stochastic
//! six-vertex sweep, and a discrete-time TASEP for its height function),
//! evaluates the limit objects, and computes the exact specializations.

pub mod airy;
pub mod bpd;
pub mod error;
pub mod exact;
pub mod io;
pub mod mc;
pub mod nonreduced;
pub mod perm;
pub mod permuton;
pub mod pipedream;
pub mod rng;
pub mod stats;
pub mod tasep;
pub mod tw;
pub mod vertex;

pub use error::{Error, Result};
pub use perm::{Composition, HeckeWord, Permutation};
pub use pipedream::PipeDream;
