use thiserror::Error;

/// Errors raised by the jump calculus and its oracle.
///
/// Several variants (`Inconsistent`, `EmptyCell`, `LemmaViolation`,
/// `InexactDivision`, `FlatnessViolation`) can only fire on a bug or on a
/// falsified theorem; they are fatal for verification runs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: i64, m: i64 },

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("{0} is not prime but primes were required")]
    PrimalityRequired(i64),

    #[error("index {k} outside [0, {n})")]
    OutOfRange { k: i64, n: i64 },

    #[error("jump expressions disagree: N0={n0}, N2={n2}, N1/2={n1_half}")]
    Inconsistent { n0: i64, n2: i64, n1_half: i64 },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("zone cell {0:?} must be empty")]
    EmptyCell([u8; 3]),

    #[error("{count} of the three inverse-sum inequalities hold; expected 1 or 2")]
    LemmaViolation { count: u8 },

    #[error("n = {n} exceeds the oracle bound {limit}")]
    TooLarge { n: i64, limit: i64 },

    #[error("division by (1 - x^{divisor}) left a nonzero remainder at degree {degree}")]
    InexactDivision { divisor: i64, degree: usize },

    #[error("|a(k) - a(k-1)| = {jump} > 1 at k = {k}")]
    FlatnessViolation { k: i64, jump: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
