use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameters outside the supported regime: {0}")]
    OutOfRegime(String),

    #[error("ambiguous C* table entry at p={p}, p'={p_prime}: candidate values {values:?}")]
    AmbiguousCStar {
        p: usize,
        p_prime: usize,
        values: Vec<usize>,
    },

    #[error("pattern error: {0}")]
    Pattern(String),

    #[error("restricted parity system has a trivial nullspace on support {support:?}")]
    RankDeficient { support: Vec<usize> },

    #[error("span violation: M={finished:?} I1={i1:?} I2={i2:?} residual={residual:e}")]
    SpanViolation {
        finished: Vec<usize>,
        i1: Vec<usize>,
        i2: Vec<usize>,
        residual: f64,
    },

    #[error("enumeration of {tuples} tuples exceeds the limit of {limit}")]
    GuardExceeded { tuples: u128, limit: u128 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error: {0}")]
    Parse(String),
}
