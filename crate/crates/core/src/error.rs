use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field order {p}^{m} exceeds the size cap of 2^{cap_bits}")]
    FieldTooLarge { p: u64, m: usize, cap_bits: u32 },

    #[error("operands belong to different fields")]
    ContextMismatch,

    #[error("attempted to invert zero")]
    ZeroInverse,

    #[error("{d} does not divide the multiplicative group order {order}")]
    NoRootOfUnity { d: BigUint, order: BigUint },

    #[error("effort cap exceeded: {0}")]
    EffortCap(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("construction invariant violated: {0}")]
    Invariant(String),

    #[error("malformed certificate: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Verification,
    Hypothesis,
    Resource,
    Usage,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NoRootOfUnity { .. } | Error::Hypothesis(_) | Error::NotPrime(_) => {
                ErrorClass::Hypothesis
            }
            Error::FieldTooLarge { .. } | Error::EffortCap(_) => ErrorClass::Resource,
            Error::Malformed(_) | Error::Invariant(_) | Error::ContextMismatch => {
                ErrorClass::Verification
            }
            Error::ZeroDegree | Error::ZeroInverse | Error::InvalidArgument(_) | Error::Io(_) => {
                ErrorClass::Usage
            }
        }
    }
}
