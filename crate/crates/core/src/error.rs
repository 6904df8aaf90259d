use thiserror::Error;

use crate::C64;

/// Errors raised by the measure, transform and Hilbert-space routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A requested moment or density degree exceeds the configured cap.
    #[error("degree {requested} exceeds the configured maximum {max}")]
    DegreeCap { requested: usize, max: usize },

    /// The input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The principal value does not exist at the given point (an atom sits there).
    #[error("principal value undefined at {0}: atom at the evaluation point")]
    PvUndefined(C64),

    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Not enough unflagged samples to form a limit estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A factorization or solve lost too much accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A truncated expansion is not accurate enough at the requested degree.
    #[error("degree insufficient: {0}")]
    DegreeInsufficient(String),

    /// Malformed measure file.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// Feature not supported by this build (unknown component type, ...).
    #[error("unsupported: {0}")]
    Capability(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
