use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive price {value} at row {row}, column {column}")]
    NonPositivePrice { row: usize, column: usize, value: f64 },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },

    #[error("day identifiers not strictly increasing at row {row}: {previous} then {current}")]
    UnsortedDays { row: usize, previous: String, current: String },

    #[error("{labels} day identifiers for {rows} rows")]
    LabelMismatch { labels: usize, rows: usize },

    #[error("return curves must start at zero (row {row} starts at {value})")]
    NonzeroOrigin { row: usize, value: f64 },

    #[error("intraday grid needs at least {min} intervals, got {k}")]
    GridTooSmall { k: usize, min: usize },

    #[error("need at least {min} days, got {n}")]
    TooFewDays { n: usize, min: usize },

    #[error("zero total quadratic variation on day {day} (row {row})")]
    FlatDay { row: usize, day: String },

    #[error("degenerate covariance: zero trace (all curves identical)")]
    DegenerateCovariance,

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    AsymmetricCovariance(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for failures caused by degenerate numbers rather than malformed
    /// input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::FlatDay { .. } | Error::DegenerateCovariance | Error::AsymmetricCovariance(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
