use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, DVector};

use super::{fisher_at_means, log_likelihood_at_means, means, ols_init, value_and_score, RegressionDataset};
use crate::error::Result;
use crate::linalg;
use crate::link::Link;
use crate::optim::{self, BfgsOptions, Objective, Termination};

/// Tuning of [`fit_mle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// `parameter_gate` doubles as the stationarity requirement: a run is only
    /// reported as converged when the score max-norm is at most this value.
    pub optimizer: BfgsOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            optimizer: BfgsOptions {
                parameter_gate: 1e-6,
                ..BfgsOptions::default()
            },
        }
    }
}

/// Output of [`fit_mle`].
#[derive(Debug, Clone)]
pub struct FitResult {
    pub beta_hat: DVector<f64>,
    /// Inverse Fisher information at `beta_hat`.
    pub covariance: DMatrix<f64>,
    pub log_likelihood: f64,
    pub mu_hat: DVector<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Max-norm of the score at `beta_hat`.
    pub gradient_norm: f64,
    pub termination: Termination,
    pub link: Link,
    /// Log-likelihood at the starting point followed by the running total of
    /// the accepted increases.
    pub trace: Vec<f64>,
}

impl FitResult {
    pub fn n_coefficients(&self) -> usize {
        self.beta_hat.len()
    }
}

/// Negated log-likelihood. Differences between two coefficient vectors are
/// accumulated per observation from the mean ratio, which keeps the Armijo
/// test meaningful when the likelihood itself is large.
struct NegLogLikelihood<'a> {
    data: &'a RegressionDataset,
    link: Link,
}

impl Objective for NegLogLikelihood<'_> {
    fn evaluate(&mut self, beta: &DVector<f64>) -> (f64, DVector<f64>) {
        let (ll, score) = value_and_score(beta, self.data, self.link);
        (-ll, -score)
    }

    fn difference(&mut self, from: &DVector<f64>, to: &DVector<f64>, f_from: f64, f_to: f64) -> f64 {
        let x = self.data.x();
        let eta = x * from;
        let delta = x * (to - from);
        let mut change = 0.0;
        for ((&y, &e), &d) in self.data.y().iter().zip(eta.iter()).zip(delta.iter()) {
            let mu = self.link.inverse(e);
            let log_ratio = self.link.log_mean_ratio(e, d);
            // l(to) - l(from) for one observation
            change += -2.0 * log_ratio - FRAC_PI_4 * (y / mu) * (y / mu) * (-2.0 * log_ratio).exp_m1();
        }
        if change.is_finite() {
            -change
        } else {
            f_to - f_from
        }
    }
}

/// Maximum-likelihood fit by BFGS on the negated log-likelihood, started from
/// [`ols_init`].
pub fn fit_mle(data: &RegressionDataset, link: Link, options: &FitOptions) -> Result<FitResult> {
    let start = ols_init(data, link)?;
    let outcome = optim::minimize(NegLogLikelihood { data, link }, start, &options.optimizer);

    let gradient_norm = outcome.gradient_norm();
    let stopped_cleanly = match outcome.termination {
        Termination::GradientTolerance | Termination::ParameterTolerance => true,
        Termination::LineSearchFailed => gradient_norm <= options.optimizer.parameter_gate,
        Termination::IterationLimit | Termination::InfeasibleStart => false,
    };

    let beta_hat = outcome.x;
    let trace = outcome.trace.iter().map(|f| -f).collect();
    let (mu_hat, log_likelihood, covariance) = match means(&beta_hat, data, link) {
        Some(mu) => {
            let ll = log_likelihood_at_means(&mu, data);
            let cov = linalg::spd_inverse(&fisher_at_means(&mu, data, link), "Fisher information").ok();
            (mu, ll, cov)
        }
        None => (DVector::from_element(data.len(), f64::NAN), f64::NEG_INFINITY, None),
    };
    let converged = stopped_cleanly && covariance.is_some();
    let r = data.n_coefficients();

    Ok(FitResult {
        beta_hat,
        covariance: covariance.unwrap_or_else(|| DMatrix::from_element(r, r, f64::NAN)),
        log_likelihood,
        mu_hat,
        converged,
        iterations: outcome.iterations,
        gradient_norm,
        termination: outcome.termination,
        link,
        trace,
    })
}

/// `g^{-1}(X beta_hat)`.
pub fn fitted_means(fit: &FitResult, data: &RegressionDataset, link: Link) -> DVector<f64> {
    let eta = data.x() * &fit.beta_hat;
    eta.map(|e| link.inverse(e))
}
