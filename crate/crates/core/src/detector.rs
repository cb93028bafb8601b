//! Wald tests on fitted coefficients.
//!
//! For interest indices `I` with null values `b0`, the statistic is
//! `T = (b_I - b0)' [Cov]_{II}^{-1} (b_I - b0)` where `Cov` is the inverse Fisher
//! information of the full model. Under the null `T` is asymptotically
//! chi-square with `nu = |I|` degrees of freedom; `H0` is rejected when `T`
//! exceeds the `1 - pfa` quantile.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::regression::FitResult;
use crate::special::ChiSquare;

/// Which coefficients are tested, their null values, and the false-alarm probability.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisSpec {
    interest: Vec<usize>,
    null_values: Vec<f64>,
    pfa: f64,
}

impl HypothesisSpec {
    /// `interest` holds zero-based coefficient indices.
    pub fn new(interest: Vec<usize>, null_values: Vec<f64>, pfa: f64) -> Result<Self> {
        if interest.is_empty() {
            return Err(Error::InvalidHypothesis("no coefficients of interest".into()));
        }
        if interest.len() != null_values.len() {
            return Err(Error::InvalidHypothesis(format!(
                "{} indices but {} null values",
                interest.len(),
                null_values.len()
            )));
        }
        let mut sorted = interest.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidHypothesis("repeated coefficient index".into()));
        }
        if let Some(v) = null_values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidHypothesis(format!("null value {v} is not finite")));
        }
        if !(pfa > 0.0 && pfa < 1.0) {
            return Err(Error::domain("pfa", pfa, "(0, 1)"));
        }
        Ok(Self {
            interest,
            null_values,
            pfa,
        })
    }

    /// `H0: beta_index = 0`.
    pub fn single(index: usize, pfa: f64) -> Result<Self> {
        Self::new(vec![index], vec![0.0], pfa)
    }

    pub fn interest(&self) -> &[usize] {
        &self.interest
    }

    pub fn null_values(&self) -> &[f64] {
        &self.null_values
    }

    pub fn pfa(&self) -> f64 {
        self.pfa
    }

    pub fn dof(&self) -> usize {
        self.interest.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaldReport {
    pub statistic: f64,
    pub dof: usize,
    pub threshold: f64,
    pub p_value: f64,
    pub pfa: f64,
    pub reject: bool,
}

/// Wald statistic from a coefficient vector and its covariance matrix.
pub fn wald_statistic_from(
    estimates: &DVector<f64>,
    covariance: &DMatrix<f64>,
    spec: &HypothesisSpec,
) -> Result<f64> {
    let r = estimates.len();
    if covariance.shape() != (r, r) {
        return Err(Error::DimensionMismatch(format!(
            "{r} estimates but covariance is {}x{}",
            covariance.nrows(),
            covariance.ncols()
        )));
    }
    if let Some(&bad) = spec.interest.iter().find(|&&i| i >= r) {
        return Err(Error::InvalidHypothesis(format!(
            "coefficient index {bad} out of range for {r} coefficients"
        )));
    }
    let nu = spec.dof();
    let block = DMatrix::from_fn(nu, nu, |a, b| covariance[(spec.interest[a], spec.interest[b])]);
    let diff = DVector::from_fn(nu, |a, _| estimates[spec.interest[a]] - spec.null_values[a]);
    let chol = linalg::spd_factor(&block, "covariance block of the tested coefficients")?;
    let t = diff.dot(&chol.solve(&diff));
    Ok(t.max(0.0))
}

pub fn wald_test_from(
    estimates: &DVector<f64>,
    covariance: &DMatrix<f64>,
    spec: &HypothesisSpec,
) -> Result<WaldReport> {
    let statistic = wald_statistic_from(estimates, covariance, spec)?;
    let chi = ChiSquare::new(spec.dof() as u32)?;
    let threshold = chi.quantile(1.0 - spec.pfa)?;
    let p_value = chi.survival(statistic)?;
    Ok(WaldReport {
        statistic,
        dof: spec.dof(),
        threshold,
        p_value,
        pfa: spec.pfa,
        reject: statistic > threshold,
    })
}

/// Wald statistic for a fitted model, using the full-model covariance.
pub fn wald_statistic(fit: &FitResult, spec: &HypothesisSpec) -> Result<f64> {
    wald_statistic_from(&fit.beta_hat, &fit.covariance, spec)
}

/// Statistic, threshold `chi2_nu(1 - pfa)`, p-value and decision.
pub fn wald_test(fit: &FitResult, spec: &HypothesisSpec) -> Result<WaldReport> {
    wald_test_from(&fit.beta_hat, &fit.covariance, spec)
}
