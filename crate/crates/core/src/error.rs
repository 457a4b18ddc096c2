use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("k = {k} outside [0, {n}]")]
    KOutOfRange { n: i64, k: i64 },

    #[error("chain map lift failed at s = {s}, t = {t}: the module map is not A-linear")]
    LiftFailed { s: usize, t: i32 },

    #[error("H2 is indeterminate: the group contains the unresolved extension atom(s) {0}")]
    IndeterminateH2(String),

    #[error("stem {stem} is missing from the stem data")]
    MissingStem { stem: u32 },

    #[error("stem {stem}: {reason}")]
    ExceptionalStem { stem: u32, reason: String },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
