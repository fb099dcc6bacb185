use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("time {t} outside the annealing window [0, {tau}]")]
    TimeOutOfRange { t: f64, tau: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate point: {0}")]
    Degenerate(String),

    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: String, right: String },

    #[error("system size {n} exceeds the limit {max} for this operation")]
    SizeLimit { n: usize, max: usize },

    #[error("integration failed: {reason} (norm drift {norm_drift:.3e} after {steps} steps)")]
    Integration {
        reason: String,
        norm_drift: f64,
        steps: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
