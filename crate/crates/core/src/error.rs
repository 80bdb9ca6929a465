use thiserror::Error;

/// Errors raised by the exact-arithmetic routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor {requested} exceeds the cap {cap}")]
    ConductorCap { requested: u64, cap: u64 },

    #[error("window translate by ({k1}, {k2}) leaves the patch")]
    OutOfInterior { k1: i64, k2: i64 },

    #[error("incompatible dimensions: {0}")]
    IncompatibleDims(String),

    #[error("window has negative coordinates; shift is only defined for nonnegative exponents")]
    UnsupportedWindow,

    #[error("rank deficiency for n = {n}: rank {rank}, expected {expected}")]
    RankDeficient { n: u32, rank: usize, expected: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
