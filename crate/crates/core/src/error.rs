use thiserror::Error;

/// Errors produced by the invariant and obstruction computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd(0, 0) is undefined")]
    GcdBothZero,

    #[error("{q} is not invertible mod {p}")]
    NotInvertible { q: i64, p: i64 },

    #[error("p = {p} and q = {q} must be coprime")]
    NotCoprime { p: i64, q: i64 },

    #[error("invalid lens space parameters p = {p}, q = {q}")]
    InvalidLensSpace { p: i64, q: i64 },

    #[error("{what} out of range: {got}")]
    OutOfRange { what: &'static str, got: i64 },

    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("continued fraction term {0} is < 2")]
    BadCfTerm(i64),

    #[error("invalid rational literal: {0:?}")]
    BadRationalLiteral(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
