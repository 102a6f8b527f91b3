//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by measure computation, distribution construction,
/// simulation and solving.
#[derive(Debug, Error)]
pub enum Error {
    /// A record carries a non-positive (or non-finite) effort value.
    #[error("record `{id}`: {field} must be a positive finite number of work-hours, got {value}")]
    InvalidEffort {
        id: String,
        field: &'static str,
        value: f64,
    },

    /// A dataset-level operation received no records.
    #[error("dataset is empty; at least one record is required")]
    EmptyDataset,

    /// A report was requested for an empty set of measures.
    #[error("no bias measures requested")]
    NoMeasures,

    /// An unknown measure name was supplied.
    #[error("unknown bias measure `{0}`")]
    UnknownMeasure(String),

    /// An unknown estimate-type tag was supplied.
    #[error("unknown estimate type `{0}` (expected mean, median, mode or unknown)")]
    UnknownEstimateType(String),

    /// A distribution parameter is out of its domain.
    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),

    /// A distribution spec string did not parse.
    #[error("invalid distribution spec `{spec}`: {reason}")]
    InvalidDistSpec { spec: String, reason: String },

    /// Reading an empirical sample file failed.
    #[error("failed to read `{path}`: {source}")]
    EmpiricalFile {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A line of an empirical sample file is not a positive real.
    #[error("`{path}` line {line}: expected a positive real, got `{value}`")]
    EmpiricalValue {
        path: String,
        line: usize,
        value: String,
    },

    /// A fixed estimate must be strictly positive.
    #[error("estimate must be a positive finite number, got {0}")]
    InvalidEstimate(f64),

    /// A simulation or scan grid is unusable.
    #[error("estimate grid is empty")]
    EmptyGrid,

    /// Grid values must be strictly increasing.
    #[error("estimate grid must be strictly increasing (offending pair: {0}, {1})")]
    GridNotIncreasing(f64, f64),

    /// Root bracketing failed; carries the widest interval scanned.
    #[error(
        "no sign change found while scanning [{lo}, {hi}]; cannot bracket a zero-bias estimate"
    )]
    BracketFailed { lo: f64, hi: f64 },

    /// Exact enumeration was requested for a continuous distribution.
    #[error("distribution has no finite support; exact enumeration unavailable")]
    NoExactEnumeration,

    /// The ratio-expectation approximation needs a non-zero denominator mean.
    #[error("ratio-expectation approximation requires a non-zero denominator mean")]
    ZeroDenominatorMean,

    /// A calibration target percentile must lie strictly inside (0, 1).
    #[error("target percentile must lie in (0, 1), got {0}")]
    InvalidTarget(f64),

    /// PERT inputs must satisfy min <= most likely <= max, all positive.
    #[error(
        "PERT inputs must satisfy 0 < min <= most likely <= max, got ({min}, {most_likely}, {max})"
    )]
    InvalidPertOrder {
        min: f64,
        most_likely: f64,
        max: f64,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
