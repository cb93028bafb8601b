//! Rayleigh regression for nonnegative amplitude signals.
//!
//! The response `y[n] > 0` is modelled as Rayleigh distributed with mean
//! `mu[n]`, and `g(mu[n]) = x[n]' beta` for a link function `g` (log by
//! default). The crate provides
//!
//! - [`distribution`]: the mean-indexed Rayleigh law (density, cdf, quantile, sampling)
//! - [`special`]: normal and chi-square distribution functions
//! - [`regression`]: likelihood, score, Fisher information and the BFGS fitter
//! - [`diagnostics`]: quantile residuals, generalized R², standard errors, intervals
//! - [`detector`]: Wald tests with thresholds set by a false-alarm probability
//! - [`montecarlo`]: seeded replication engine for estimator bias, MSE and test size
//! - [`sar`]: region detection on amplitude images via dummy-variable designs
//!
//! ```
//! use rayreg::regression::{fit_mle, FitOptions, RegressionDataset};
//! use rayreg::Link;
//!
//! let y = vec![0.8, 1.1, 0.4, 2.0, 1.3, 0.9];
//! let x2 = vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
//! let data = RegressionDataset::with_intercept(y, &[x2]).unwrap();
//! let fit = fit_mle(&data, Link::Log, &FitOptions::default()).unwrap();
//! assert!(fit.converged);
//! ```

pub mod detector;
pub mod diagnostics;
pub mod distribution;
pub mod error;
pub mod linalg;
pub mod link;
pub mod montecarlo;
pub mod numfmt;
pub mod optim;
pub mod regression;
pub mod sar;
pub mod special;

pub use error::{Error, Result};
pub use link::Link;
