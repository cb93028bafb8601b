//! Goodness of fit: quantile residuals, generalized R², standard errors and
//! Wald confidence intervals.

use serde::Serialize;

use crate::distribution::RayleighMean;
use crate::error::{Error, Result};
use crate::link::Link;
use crate::regression::{fit_mle, FitOptions, FitResult, RegressionDataset};
use crate::special::std_normal_quantile;

/// Bound applied to fitted cdf values before the normal quantile, so every
/// residual stays finite.
pub const CDF_CLAMP: f64 = 1e-15;

/// Quantile residuals in observation order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSeries {
    pub values: Vec<f64>,
}

impl ResidualSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (self.values.len() as f64 - 1.0)
    }

    /// Kolmogorov-Smirnov distance to the standard normal cdf.
    pub fn ks_distance(&self) -> f64 {
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        sorted
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let f = crate::special::std_normal_cdf(r);
                (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
            })
            .fold(0.0, f64::max)
    }

    pub fn summary(&self) -> ResidualSummary {
        ResidualSummary {
            count: self.len(),
            mean: self.mean(),
            variance: self.variance(),
            min: self.values.iter().copied().fold(f64::INFINITY, f64::min),
            max: self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ks_distance: self.ks_distance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub ks_distance: f64,
}

/// `r[n] = Phi^{-1}(F(y[n]; mu_hat[n]))`, with `F` clamped to `[1e-15, 1 - 1e-15]`.
pub fn quantile_residuals(fit: &FitResult, data: &RegressionDataset) -> Result<ResidualSeries> {
    if fit.mu_hat.len() != data.len() {
        return Err(Error::DimensionMismatch(format!(
            "fit has {} fitted means, dataset has {} observations",
            fit.mu_hat.len(),
            data.len()
        )));
    }
    let values = data
        .y()
        .iter()
        .zip(fit.mu_hat.iter())
        .map(|(&y, &mu)| {
            let u = RayleighMean::new(mu)?.cdf(y)?;
            std_normal_quantile(u.clamp(CDF_CLAMP, 1.0 - CDF_CLAMP))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualSeries { values })
}

/// Maximized log-likelihood of the intercept-only model on the same response.
pub fn null_log_likelihood(data: &RegressionDataset, link: Link) -> Result<f64> {
    let null = RegressionDataset::intercept_only(data.y().iter().copied().collect())?;
    let fit = fit_mle(&null, link, &FitOptions::default())?;
    if !fit.converged {
        return Err(Error::NonConvergence {
            iterations: fit.iterations,
            gradient_norm: fit.gradient_norm,
        });
    }
    Ok(fit.log_likelihood)
}

/// Generalized coefficient of determination
/// `R² = 1 - exp(-(2/N) (l(beta_hat) - l_null))`, where `l_null` is the
/// intercept-only fit under the same link.
pub fn r_squared(fit: &FitResult, data: &RegressionDataset, link: Link) -> Result<f64> {
    let null = null_log_likelihood(data, link)?;
    let n = data.len() as f64;
    let r2 = -(-(2.0 / n) * (fit.log_likelihood - null)).exp_m1();
    Ok(r2.clamp(0.0, 1.0))
}

/// Square roots of the covariance diagonal.
pub fn standard_errors(fit: &FitResult) -> Vec<f64> {
    fit.covariance.diagonal().iter().map(|v| v.sqrt()).collect()
}

/// Two-sided Wald intervals `beta_hat_i -/+ z_{(1+level)/2} SE_i`.
pub fn confidence_intervals(fit: &FitResult, level: f64) -> Result<Vec<(f64, f64)>> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain("level", level, "(0, 1)"));
    }
    let z = std_normal_quantile(1.0 - (1.0 - level) / 2.0)?;
    Ok(fit
        .beta_hat
        .iter()
        .zip(standard_errors(fit))
        .map(|(&b, se)| (b - z * se, b + z * se))
        .collect())
}
