use thiserror::Error;

/// Errors produced by the frobscope library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} outside the supported range [2, 2^62)")]
    ModulusOutOfRange(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("expected an odd prime, got {0}")]
    EvenPrime(u64),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("divisor is not monic")]
    NonMonicDivisor,

    #[error("polynomial degree {found} is below the required minimum {required}")]
    DegreeTooSmall { found: usize, required: usize },

    #[error("{what}: requested {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("prime {0} divides the discriminant (ramified)")]
    RamifiedPrime(u64),

    #[error("quadratic has zero discriminant")]
    DegenerateQuadratic,

    #[error("recurrence does not have the required characteristic polynomial")]
    WrongClass,

    #[error("equal-degree splitting by Cantor-Zassenhaus needs odd characteristic, got {0}")]
    EvenCharacteristic(u64),

    #[error("polynomial is zero")]
    ZeroPolynomial,

    #[error("random splitting failed after {0} attempts")]
    SplitFailure(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A mathematical invariant failed at runtime. Never expected; abort loudly.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
