use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not square-free")]
    NotSquareFree(u64),
    #[error("level must be positive")]
    ZeroLevel,
    #[error("level {0} has {1} prime factors; at most {2} are supported")]
    TooManyPrimes(u64, usize, usize),
    #[error("level {0} exceeds the configured cap {1}")]
    LevelTooLarge(u64, u64),
    #[error("{m} does not divide {n}")]
    NotADivisor { m: u64, n: u64 },
    #[error("M = 1 is not allowed here")]
    TrivialDivisor,
    #[error("divisors belong to different levels ({0} and {1})")]
    LevelMismatch(u64, u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime factor of the level")]
    NotAPrimeFactor(u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("usable precision {0} is too small")]
    PrecisionTooSmall(usize),
    #[error("ideal has infinite index: {0}")]
    InfiniteIndex(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
