use thiserror::Error;

/// Errors raised by the arithmetic and conversion routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error(
        "no primitive root of unity of order {order} (supported: powers of two up to 2^{max_log})"
    )]
    UnsupportedRootOrder { order: u64, max_log: u32 },

    #[error("transform of size {required} exceeds the field's NTT capacity {capacity}")]
    NttCapacity { required: usize, capacity: usize },

    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: u64, reason: String },

    #[error("invalid family at index {index}: {reason}")]
    InvalidFamily { index: usize, reason: String },

    #[error("family defines {available} triples but index {needed} was requested")]
    FamilyTooShort { needed: usize, available: usize },

    #[error("power series with zero constant term is not invertible")]
    NotInvertible,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
