use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("invalid permutation: {0}")]
    Permutation(String),
    #[error("index {index} is outside 1..={n}")]
    Index { index: usize, n: usize },
    #[error("invalid composition: {0}")]
    Composition(String),
    #[error("letter {letter} is outside 1..{n}")]
    Letter { letter: usize, n: usize },
    #[error("order {n} exceeds the enumeration cap {cap}")]
    Cap { n: usize, cap: usize },
    #[error("point ({x}, {y}) is outside the required region: {why}")]
    Domain { x: f64, y: f64, why: &'static str },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("empty input")]
    Empty,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Probability(p))
    }
}
