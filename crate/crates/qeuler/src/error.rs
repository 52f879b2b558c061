//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by context construction, character validation and the
/// evaluation kernels.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The context violates an invariant (q = 0, q = 1, |q| >= 1, bad
    /// precision or tolerance).
    #[error("invalid context: {0}")]
    InvalidContext(String),

    /// Exact mode was asked for q^x with an exponent outside the exponent
    /// lattice of the base.
    #[error("non-integer exponent in exact mode: q^({0}) is not rational for this base")]
    NonIntegerExponentInExactMode(String),

    /// A polynomial argument x that exact mode cannot represent.
    #[error("non-integer argument in exact mode: {0}")]
    NonIntegerXInExactMode(String),

    /// Scalars of different variants (or not matching the context mode) were
    /// combined.
    #[error("mixed scalar variants: {0}")]
    MixedVariants(String),

    /// Character modulus must be odd.
    #[error("modulus {0} is even; Dirichlet characters here require odd conductor")]
    EvenModulus(u32),

    /// `quadratic` requires an odd prime.
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),

    /// Value table fails complete multiplicativity, with a witness pair.
    #[error("character table is not completely multiplicative at a={a}, b={b}")]
    NotMultiplicative { a: u32, b: u32 },

    /// Table is zero off the wrong set: values[a] must vanish iff gcd(a,d)>1.
    #[error("character table has wrong zero pattern at residue {0}")]
    WrongZeroPattern(u32),

    /// A nonzero table entry is not a root of unity.
    #[error("character value at residue {0} is not a root of unity")]
    NonUnitValue(u32),

    /// Operation needs numeric mode (or a rational-valued character set).
    #[error("exact mode unsupported: {0}")]
    ExactModeUnsupported(String),

    /// Character invalid for the requested evaluation.
    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    /// The defining series of Eq-(1.4) shape diverges (h < r).
    #[error("series diverges for h={h} < r={r}; only the regularized closed form is defined there")]
    DivergentSeries { h: i64, r: u32 },

    /// Reported tail bound exceeds the context tolerance.
    #[error("truncation too coarse: tail bound {tail} exceeds tolerance {tolerance}")]
    TruncationTooCoarse { tail: String, tolerance: String },

    /// Naive multi-index sum would exceed the term budget.
    #[error("complexity guard: w^r = {terms} exceeds 10^8 terms")]
    ComplexityGuard { terms: u128 },

    /// Argument outside the supported domain (x <= 0, non-positive-real base
    /// for a fractional power, ...).
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    /// w1 or w2 is not odd.
    #[error("oddness violation: {0} must be odd")]
    OddnessViolation(u32),

    /// Malformed parameter (bad range, bad literal, i > n, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
