// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter record or argument violates its invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Matrix shape does not match the chain layout.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A state left the set of valid density matrices during propagation,
    /// or an eigen-solve produced an inadmissible value.
    #[error("numerical failure at t = {time}: {reason}")]
    NumericalFailure { time: f64, reason: String },

    /// A sweep point failed; carries the axis value of the offending point.
    #[error("sweep point {axis} = {value} failed: {source}")]
    SweepPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    /// One or more points of a sweep failed; no rows are returned.
    #[error("{failed} of {total} sweep points failed; first: {first}")]
    SweepFailed {
        failed: usize,
        total: usize,
        first: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn numerical(time: f64, reason: impl Into<String>) -> Self {
        Error::NumericalFailure {
            time,
            reason: reason.into(),
        }
    }

    /// True when this error (or the sweep point it wraps) is a numerical failure.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NumericalFailure { .. } => true,
            Error::SweepPoint { source, .. } => source.is_numerical(),
            Error::SweepFailed { first, .. } => first.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
