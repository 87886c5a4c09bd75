use thiserror::Error;

/// Errors raised by construction, evaluation and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moment of order {order} diverges for {what}")]
    MomentDivergence { what: String, order: f64 },

    #[error("truncation level {trunc} too small: nu(trunc, inf) = {mass} exceeds 1")]
    TruncationTooSmall { trunc: f64, mass: f64 },

    #[error("horizon {horizon} too small: truncated kernel mass fraction {fraction:.3e} exceeds 1%")]
    HorizonTooSmall { horizon: f64, fraction: f64 },

    #[error("check not applicable: {0}")]
    Inapplicable(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
