use thiserror::Error;

/// Errors raised by forest construction, kernel algebra, testing and the
/// simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("data matrix needs at least {min} rows, got {got}")]
    TooFewRows { min: usize, got: usize },

    #[error("data matrix needs at least one column")]
    NoColumns,

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("ragged data: row {row} has {got} columns, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("kernel maximum is {0}, must be positive")]
    NonPositiveMax(f64),

    #[error("forest has no partitions")]
    EmptyForest,

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("csv parse error at line {line}, column {col}: {reason}")]
    Csv {
        line: usize,
        col: usize,
        reason: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
