use thiserror::Error;

use crate::markov::VtestFailure;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row} sums to {sum} (expected 1 within {tol:e})")]
    RowSumError { row: usize, sum: f64, tol: f64 },

    #[error("declared edge ({from}, {to}) carries non-positive mass {value}")]
    ZeroOnEdge { from: usize, to: usize, value: f64 },

    #[error("entry ({from}, {to}) = {value} lies off the declared edge set")]
    OffEdgeMass { from: usize, to: usize, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not irreducible; the stationary distribution is not unique")]
    NotIrreducible,

    #[error("power iteration did not converge after {iterations} iterations (last {last}, previous {previous})")]
    NoConvergence {
        iterations: usize,
        last: f64,
        previous: f64,
    },

    #[error("no denominator <= {max_denominator} reproduces the distribution within {tol:e} (best error {best_error:e})")]
    RationalizationFailed {
        max_denominator: u64,
        tol: f64,
        best_error: f64,
    },

    #[error("matrix is not lumpable: rows {first} and {second} disagree on block {block}")]
    NotLumpable {
        first: usize,
        second: usize,
        block: usize,
    },

    #[error("edge mismatch: {0}")]
    EdgeMismatch(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("enumeration of {size} entries exceeds the guard of {limit}")]
    TooLarge { size: u128, limit: u128 },

    #[error(
        "trajectory alphabet ({found} states) incompatible with embedding over {expected} states"
    )]
    IncompatibleStateCount { expected: usize, found: usize },

    #[error("reference chain is not in the restricted class: {}", format_failures(.0))]
    NotInVtest(Vec<VtestFailure>),

    #[error("alternative #{index} lies in the exclusion region or outside the class: {reason}")]
    ExclusionRegion { index: usize, reason: String },

    #[error("invalid test configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that signal a violated statistical precondition
    /// rather than malformed input.
    pub fn is_statistical_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotInVtest(_) | Error::ExclusionRegion { .. } | Error::PreconditionFailed(_)
        )
    }
}

fn format_failures(failures: &[VtestFailure]) -> String {
    failures
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
