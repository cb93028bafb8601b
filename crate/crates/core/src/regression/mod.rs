//! Rayleigh regression: the mean of each observation is linked to a linear
//! predictor, `g(mu[n]) = x[n]' beta`.
//!
//! Log-likelihood, score and Fisher information are evaluated analytically.
//! The score is assembled as `X' T v` with `T = diag(1 / g'(mu[n]))` and
//! `v[n] = pi y[n]^2 / (2 mu[n]^3) - 2 / mu[n]`; the expected information is
//! `X' W X` with `W = diag(4 / mu[n]^2 (d mu / d eta)^2)`.

mod fit;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::{DMatrix, DVector};

use crate::distribution::log_density;
use crate::error::{Error, Result};
use crate::linalg;
use crate::link::Link;

pub use fit::{fit_mle, fitted_means, FitOptions, FitResult};

/// Positive responses `y` with an `N x r` design matrix `X` of full column rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDataset {
    y: DVector<f64>,
    x: DMatrix<f64>,
}

impl RegressionDataset {
    pub fn new(y: Vec<f64>, x: DMatrix<f64>) -> Result<Self> {
        let n = y.len();
        let r = x.ncols();
        if x.nrows() != n {
            return Err(Error::DimensionMismatch(format!(
                "response has {n} observations but the design matrix has {} rows",
                x.nrows()
            )));
        }
        if r == 0 {
            return Err(Error::InvalidDataset("design matrix has no columns".into()));
        }
        if n <= r {
            return Err(Error::InvalidDataset(format!(
                "need more observations than coefficients (N = {n}, r = {r})"
            )));
        }
        if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NonPositiveResponse { index, value });
        }
        if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
            // column-major storage
            return Err(Error::InvalidDataset(format!(
                "design matrix entry ({}, {}) is not finite",
                pos % n,
                pos / n
            )));
        }
        linalg::spd_factor(&x.tr_mul(&x), "X'X").map_err(|_| Error::RankDeficient)?;
        Ok(Self {
            y: DVector::from_vec(y),
            x,
        })
    }

    /// Dataset with a single intercept column.
    pub fn intercept_only(y: Vec<f64>) -> Result<Self> {
        let n = y.len();
        Self::new(y, DMatrix::from_element(n, 1, 1.0))
    }

    /// Dataset with an intercept column followed by the given covariate columns.
    pub fn with_intercept(y: Vec<f64>, covariates: &[Vec<f64>]) -> Result<Self> {
        let n = y.len();
        if let Some(bad) = covariates.iter().position(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "covariate {bad} has {} values, expected {n}",
                covariates[bad].len()
            )));
        }
        let x = DMatrix::from_fn(n, covariates.len() + 1, |i, j| {
            if j == 0 {
                1.0
            } else {
                covariates[j - 1][i]
            }
        });
        Self::new(y, x)
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// Number of observations `N`.
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Number of coefficients `r`.
    pub fn n_coefficients(&self) -> usize {
        self.x.ncols()
    }

    /// Same design with a different response vector.
    pub fn with_response(&self, y: Vec<f64>) -> Result<Self> {
        if y.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "response has {} observations, design has {}",
                y.len(),
                self.len()
            )));
        }
        if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NonPositiveResponse { index, value });
        }
        Ok(Self {
            y: DVector::from_vec(y),
            x: self.x.clone(),
        })
    }
}

fn check_dimension(beta: &DVector<f64>, data: &RegressionDataset) {
    assert_eq!(
        beta.len(),
        data.n_coefficients(),
        "coefficient vector length does not match the design"
    );
}

/// Means `g^{-1}(X beta)`, or `None` if any of them is not strictly positive and finite.
pub fn means(beta: &DVector<f64>, data: &RegressionDataset, link: Link) -> Option<DVector<f64>> {
    check_dimension(beta, data);
    let mut mu = &data.x * beta;
    for m in mu.iter_mut() {
        *m = link.inverse(*m);
        if !(m.is_finite() && *m > 0.0) {
            return None;
        }
    }
    Some(mu)
}

/// `l(beta) = sum_n [log(pi/2) + log y[n] - 2 log mu[n] - pi y[n]^2 / (4 mu[n]^2)]`.
///
/// Returns `-inf` when some mean is not strictly positive and finite.
pub fn log_likelihood(beta: &DVector<f64>, data: &RegressionDataset, link: Link) -> f64 {
    match means(beta, data, link) {
        Some(mu) => log_likelihood_at_means(&mu, data),
        None => f64::NEG_INFINITY,
    }
}

pub(crate) fn log_likelihood_at_means(mu: &DVector<f64>, data: &RegressionDataset) -> f64 {
    data.y.iter().zip(mu.iter()).map(|(&y, &m)| log_density(y, m)).sum()
}

fn score_at_means(mu: &DVector<f64>, data: &RegressionDataset, link: Link) -> DVector<f64> {
    // T v, elementwise
    let tv = DVector::from_iterator(
        data.len(),
        data.y.iter().zip(mu.iter()).map(|(&y, &m)| {
            let v = FRAC_PI_2 * y * y / (m * m * m) - 2.0 / m;
            v / link.derivative(m)
        }),
    );
    data.x.tr_mul(&tv)
}

/// Score vector `U(beta) = X' T v`.
pub fn score(beta: &DVector<f64>, data: &RegressionDataset, link: Link) -> Result<DVector<f64>> {
    let mu = means(beta, data, link).ok_or(Error::InfeasiblePoint)?;
    Ok(score_at_means(&mu, data, link))
}

/// Log-likelihood and score in one pass; `(-inf, NaN...)` when infeasible.
pub(crate) fn value_and_score(
    beta: &DVector<f64>,
    data: &RegressionDataset,
    link: Link,
) -> (f64, DVector<f64>) {
    match means(beta, data, link) {
        Some(mu) => (log_likelihood_at_means(&mu, data), score_at_means(&mu, data, link)),
        None => (
            f64::NEG_INFINITY,
            DVector::from_element(data.n_coefficients(), f64::NAN),
        ),
    }
}

pub(crate) fn fisher_at_means(mu: &DVector<f64>, data: &RegressionDataset, link: Link) -> DMatrix<f64> {
    let weights = mu.map(|m| {
        let d = link.mu_eta(m);
        4.0 / (m * m) * d * d
    });
    let mut weighted = data.x.clone();
    for (mut row, w) in weighted.row_iter_mut().zip(weights.iter()) {
        row *= *w;
    }
    let info = data.x.tr_mul(&weighted);
    (&info + info.transpose()) * 0.5
}

/// Expected information `I(beta) = X' W X`.
pub fn fisher_information(beta: &DVector<f64>, data: &RegressionDataset, link: Link) -> Result<DMatrix<f64>> {
    let mu = means(beta, data, link).ok_or(Error::InfeasiblePoint)?;
    Ok(fisher_at_means(&mu, data, link))
}

/// Least-squares regression of `g(y)` on `X`, used as the fitter's starting point.
pub fn ols_init(data: &RegressionDataset, link: Link) -> Result<DVector<f64>> {
    let gy = data.y.map(|y| link.link(y));
    linalg::least_squares(&data.x, &gy)
}

/// Closed-form maximum-likelihood mean of an intercept-only model:
/// `mu_hat = sqrt(pi sum y^2 / (4 N))`.
pub fn intercept_only_mle(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    (FRAC_PI_4 * y.iter().map(|v| v * v).sum::<f64>() / n).sqrt()
}
