//! Error type shared by every module of the crate.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A response value that the likelihood cannot accept.
    #[error("response y[{index}] = {value} must be strictly positive and finite")]
    NonPositiveResponse { index: usize, value: f64 },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("design matrix is rank deficient (normal equations are singular)")]
    RankDeficient,

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(&'static str),

    /// The linear predictor mapped to a mean that is zero, negative or not finite.
    #[error("coefficients map to a non-positive or non-finite mean")]
    InfeasiblePoint,

    #[error("fit did not converge after {iterations} iterations (gradient max-norm {gradient_norm:e})")]
    NonConvergence {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("invalid hypothesis: {0}")]
    InvalidHypothesis(String),

    #[error("{failures} of {replications} replications failed to converge (more than 1%)")]
    TooManyFailures { failures: usize, replications: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid region image: {0}")]
    InvalidImage(String),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
