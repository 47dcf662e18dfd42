use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while building controllers, configs, or running scenarios.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("invalid rule table: {0}")]
    RuleTable(String),

    #[error("no rule fired for inputs ({x1}, {x2})")]
    NoRuleFired { x1: f64, x2: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid disturbance schedule: {0}")]
    Schedule(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("unknown controller `{0}`")]
    UnknownController(String),

    #[error("non-finite plant state at step {step} (t = {t:e} s)")]
    NonFinite { step: usize, t: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed trace {path}: {reason}")]
    Trace { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            reason: "must be finite and nonnegative",
        })
    }
}
