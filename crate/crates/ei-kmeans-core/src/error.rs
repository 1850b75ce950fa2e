use thiserror::Error;

/// Errors produced by the partitioning and testing pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sample matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("need at least {needed} samples, found {found}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("cluster count {k} out of range for {n} samples")]
    InvalidClusterCount { k: usize, n: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("expected frequency must be positive (index {0})")]
    NonPositiveExpected(usize),

    #[error("contingency table needs at least {needed} columns, found {found}")]
    TooFewBins { needed: usize, found: usize },

    #[error("contingency table has a zero {0} sum")]
    ZeroMargin(&'static str),

    #[error("chi-square statistic must be nonnegative, got {0}")]
    NegativeStatistic(f64),

    #[error("degrees of freedom require at least 2 rows and 2 columns")]
    DegenerateTable,

    #[error("single-bin model cannot be tested (degrees of freedom would be 0)")]
    DegenerateModel,

    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
}
