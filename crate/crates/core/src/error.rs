use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library. Mathematical verification failures are not
/// errors: they are recorded in reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Param(String),

    #[error("negative exponent {0} in q-power")]
    NegativeExponent(i64),

    #[error("resource cap exceeded: predicted {predicted} subspaces, cap is {cap}")]
    ResourceCap { predicted: BigInt, cap: u64 },

    #[error("ambient mismatch between subspaces")]
    AmbientMismatch,

    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}
