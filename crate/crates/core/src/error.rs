use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{what} needs {needed}, cap is {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("{alpha} is not coprime to {modulus}")]
    NotCoprime { alpha: u64, modulus: u64 },

    #[error("inconsistent fibered datum: {0}")]
    InconsistentDatum(String),

    #[error("sylow decomposition: {0}")]
    Sylow(String),

    #[error("group order {0} is even; the Euler-product constant is not supported (use the override)")]
    EvenOrder(u64),

    #[error("logarithmic exponent {0} is not positive; Gamma has a pole there")]
    NonPositiveExponent(i64),

    #[error("sieve covers {have}, {needed} required")]
    SieveTooSmall { needed: u64, have: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("descriptor: {0}")]
    Descriptor(String),
}

/// `Err(CapExceeded)` when `needed > cap`.
pub fn cap_check(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::CapExceeded { what, needed, cap })
    } else {
        Ok(())
    }
}
