use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("exponent must be positive, got {0}")]
    ZeroExponent(u32),

    #[error("modulus {ell}^{m} exceeds 2^62")]
    ModulusTooLarge { ell: u64, m: u32 },

    #[error("{value} is not a unit modulo {q}")]
    NotUnit { value: u64, q: u64 },

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },

    /// A size or range guard was exceeded.
    #[error("{what}: {value} exceeds limit {limit}")]
    Guard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("unsupported weight {0} (supported: 12, 16, 18, 20, 22, 26)")]
    UnsupportedWeight(u32),

    #[error("invalid lift parameters k={k}, n={n}: {reason}")]
    InvalidLiftParams { k: u32, n: u32, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache file {path}: {reason}")]
    CacheFormat { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn guard(what: &'static str, value: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Guard {
            what,
            value: value.into(),
            limit: limit.into(),
        }
    }
}
