use thiserror::Error;

/// Errors produced by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cyclotomic modulus {modulus} exceeds the configured limit {limit}")]
    ModulusTooLarge { modulus: u64, limit: u64 },

    #[error("quadratic radicands are incompatible: {0}")]
    IncompatibleRadicands(String),

    #[error("character undefined at non-unit {value} (p = {p})")]
    NonUnit { value: i64, p: u64 },

    #[error("characters live on different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("{n} is not coprime to {p}")]
    NotCoprime { n: u64, p: u64 },

    #[error("precision underflow: need at least {needed} coefficients, have {available}")]
    PrecisionUnderflow { needed: usize, available: usize },

    #[error("missing Hecke eigenvalues at primes {0:?}")]
    MissingEigenvalues(Vec<u64>),

    #[error("{0} is not a root of the Hecke polynomial")]
    NotAHeckeRoot(String),

    #[error("the two roots of the Hecke polynomial coincide")]
    RepeatedRoot,

    #[error("invalid eigenform data in field `{field}`: {reason}")]
    InvalidForm { field: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bad prime {0}: use the imprimitive coefficient table instead of a local factor")]
    BadPrime(u64),

    #[error("s = {s} lies outside the region of absolute convergence (need s > {bound}); analytic continuation not implemented")]
    OutsideConvergence { s: i64, bound: String },

    #[error("tail bound {bound:e} exceeds the requested accuracy {requested:e}; increase n_max")]
    TailTooLarge { bound: f64, requested: f64 },

    #[error("non-regular stabilisation: E(f1) * E*(f1) = 0")]
    NonRegular,

    #[error("missing Petersson norm for {0}")]
    MissingPeterssonNorm(String),

    #[error("outside the non-crystalline regime: {0}")]
    OutsideRegime(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
