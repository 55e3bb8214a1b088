use thiserror::Error;

use crate::blowup::Star;

/// Errors raised by the exact core and the reduction driver.
#[derive(Debug, Error)]
pub enum Error {
    /// Label sets, shapes or identifiers do not line up.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("singular exponent matrix")]
    SingularMatrix,

    /// A value lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero series: the support is empty")]
    ZeroSeries,

    #[error("no path of edges from {from} to {to} inside the stratum closure of {{{labels}}}")]
    Connectivity {
        from: String,
        to: String,
        labels: String,
    },

    /// Propagating exponent data through the atlas produced a negative entry.
    #[error("propagated exponent is not effective at corner {corner}: {vector}")]
    NotEffective { corner: String, vector: String },

    #[error("algorithm invariant violated: {message}")]
    AlgorithmInvariantViolation {
        message: String,
        trace: Option<Box<Star>>,
    },

    #[error("step budget of {budget} blow-ups exceeded")]
    BudgetExceeded { budget: usize, trace: Box<Star> },

    /// A recorded trace does not reproduce.
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
