//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Every candidate beam carries zero power, so no serving beam exists.
    #[error("dead link: all beamspace coefficients are zero")]
    DeadLink,

    /// NOMA power allocation requires the weak user's gain to not exceed
    /// the strong user's.
    #[error("NOMA ordering violation: weak gain {g_weak} exceeds strong gain {g_strong}")]
    NomaOrdering { g_weak: f64, g_strong: f64 },

    /// Link bookkeeping referenced a cell or user that does not exist.
    #[error("inconsistent link state: {0}")]
    InconsistentState(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
}

pub type Result<T> = std::result::Result<T, Error>;
