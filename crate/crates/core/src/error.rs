use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("digit must lie in 0..=9, got {0}")]
    InvalidDigit(u32),

    #[error("digit position must lie in 2..={max}, got {got}")]
    InvalidPosition { got: u32, max: u32 },

    #[error("asymptotic formulas support positions up to {max}, got {got}")]
    PositionTooLarge { got: u32, max: u32 },

    #[error("zero has no significant digits")]
    Zero,

    #[error("upper bound {n} is below 10^(p-1) = {min}")]
    BoundTooSmall { n: u64, min: u64 },

    #[error("{what}: n = {n} exceeds the evaluation cap {cap}{hint}")]
    CapExceeded {
        what: &'static str,
        n: u64,
        cap: u64,
        hint: &'static str,
    },

    #[error("window index {i} outside [{lo}, {hi}]")]
    WindowOutOfRange { i: u64, lo: u64, hi: u64 },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("{0}")]
    Io(String),

    #[error("no records in {0}")]
    NoRecords(String),

    #[error("column {column:?} not found; available columns: {}", available.join(", "))]
    ColumnNotFound {
        column: String,
        available: Vec<String>,
    },

    #[error("no values with at least {p} digits")]
    NoEligible { p: u32 },

    #[error("model bound {n} is smaller than the largest value {max}")]
    BoundBelowData { n: u64, max: u64 },

    #[error("invalid argument: {0}")]
    Usage(String),
}

impl Error {
    /// Errors caused by the caller's arguments rather than by the computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidDigit(_)
                | Error::InvalidPosition { .. }
                | Error::PositionTooLarge { .. }
                | Error::Zero
                | Error::BoundTooSmall { .. }
                | Error::WindowOutOfRange { .. }
                | Error::NoTrials
                | Error::ColumnNotFound { .. }
                | Error::BoundBelowData { .. }
                | Error::Usage(_)
        )
    }
}
