use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by loading, partitioning, estimation and screening.
#[derive(Debug, Error)]
pub enum ScreenError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("non-numeric cell {value:?} at row {row}, column {column:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("non-finite value at row {row}, column {column:?}")]
    NonFinite { row: usize, column: String },

    #[error("response column not found: {0}")]
    ResponseNotFound(String),

    #[error("empty table")]
    EmptyTable,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("feature {feature:?} is near-constant (variance {variance:e})")]
    NearConstantFeature { feature: String, variance: f64 },

    #[error("invalid segment count m={m} for N={n}")]
    InvalidSegmentCount { m: usize, n: usize },

    #[error("segment smaller than kernel degree: size {size} < degree {degree}")]
    SegmentTooSmall { size: usize, degree: usize },

    #[error("kernel degree {0} is not supported (1..=3)")]
    UnsupportedDegree(usize),

    #[error(transparent)]
    Degenerate(#[from] DegenerateDenominator),

    #[error("expected {expected} component values, got {got}")]
    ComponentCount { expected: usize, got: usize },

    #[error("unknown measure {0:?} (expected pearson, kendall, sirs or dc)")]
    UnknownMeasure(String),

    #[error("threshold must be positive, got {0}")]
    InvalidThreshold(f64),

    #[error("top-k requires 1 <= k <= {p}, got {k}")]
    InvalidTopK { k: usize, p: usize },

    #[error("active set is empty")]
    EmptyActiveSet,

    #[error("active feature {0} has a degenerate estimate")]
    DegenerateActiveFeature(usize),

    #[error("invalid scale rho={0}; expected 0 < rho <= 1")]
    InvalidRho(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("every repetition was skipped; first reason: {0}")]
    AllRepetitionsSkipped(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// A variance-like denominator term of an aggregator was not strictly positive.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("degenerate denominator: {term} = {value:e}")]
pub struct DegenerateDenominator {
    pub term: &'static str,
    pub value: f64,
}

pub type Result<T> = std::result::Result<T, ScreenError>;
