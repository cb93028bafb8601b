//! Seeded Monte Carlo replication of the regression fitter.
//!
//! The design matrix is drawn once per scenario and held fixed; each
//! replication draws a fresh response by inversion sampling and refits.
//! Replication `i` reads from ChaCha stream `i` of the scenario seed, so the
//! result does not depend on scheduling: replications run in parallel and are
//! reduced serially in index order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::detector::{wald_test, HypothesisSpec};
use crate::distribution::RayleighMean;
use crate::error::{Error, Result};
use crate::link::Link;
use crate::numfmt::format_significant;
use crate::regression::{fit_mle, FitOptions, FitResult, RegressionDataset};

/// Seed used when a scenario does not name one.
pub const DEFAULT_SEED: u64 = 20_200_101;

/// Stream reserved for drawing the covariates; replications use streams `0..replications`.
const COVARIATE_STREAM: u64 = u64::MAX;

/// Largest tolerated fraction of non-converged replications.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub enum CovariateSource {
    /// Intercept column followed by `r - 1` columns of U(0, 1) draws.
    Uniform01,
    /// A complete `N x r` design matrix.
    Fixed(DMatrix<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub true_beta: Vec<f64>,
    pub covariates: CovariateSource,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub link: Link,
}

impl ScenarioSpec {
    pub fn new(true_beta: Vec<f64>, n: usize, replications: usize, seed: u64) -> Self {
        Self {
            true_beta,
            covariates: CovariateSource::Uniform01,
            n,
            replications,
            seed,
            link: Link::Log,
        }
    }

    /// `beta = (2, -1, 1)` with two uniform covariates.
    pub fn scenario1(n: usize, replications: usize, seed: u64) -> Self {
        Self::new(vec![2.0, -1.0, 1.0], n, replications, seed)
    }

    /// `beta = (0.5, 0.15)` with one uniform covariate.
    pub fn scenario2(n: usize, replications: usize, seed: u64) -> Self {
        Self::new(vec![0.5, 0.15], n, replications, seed)
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.true_beta.len();
        if r == 0 {
            return Err(Error::InvalidScenario("beta is empty".into()));
        }
        if self.true_beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidScenario("beta has non-finite entries".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidScenario("replications must be at least 1".into()));
        }
        if self.n <= r {
            return Err(Error::InvalidScenario(format!(
                "N = {} must exceed the number of coefficients {r}",
                self.n
            )));
        }
        if let CovariateSource::Fixed(x) = &self.covariates {
            if x.shape() != (self.n, r) {
                return Err(Error::InvalidScenario(format!(
                    "fixed design is {}x{}, expected {}x{r}",
                    x.nrows(),
                    x.ncols(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// The scenario's design matrix; uniform covariates are drawn from a stream
    /// of the seed that no replication uses.
    pub fn design(&self) -> Result<DMatrix<f64>> {
        self.validate()?;
        Ok(match &self.covariates {
            CovariateSource::Fixed(x) => x.clone(),
            CovariateSource::Uniform01 => {
                let mut rng = stream(self.seed, COVARIATE_STREAM);
                let r = self.true_beta.len();
                // row-major draw order
                let mut x = DMatrix::from_element(self.n, r, 1.0);
                for i in 0..self.n {
                    for j in 1..r {
                        x[(i, j)] = rng.random();
                    }
                }
                x
            }
        })
    }

    /// Parses a `key = value` scenario file. Keys: `beta` (comma separated),
    /// `N`, `replications`, `seed`, `link`, `covariates` (`uniform01` or the
    /// path of a headerless CSV holding the full design matrix, resolved
    /// against `base_dir`). Lines starting with `#` are comments.
    pub fn from_config_str(text: &str, base_dir: &Path) -> Result<Self> {
        let bad = |msg: String| Error::InvalidScenario(msg);
        let mut beta = None;
        let mut n = None;
        let mut replications = None;
        let mut seed = DEFAULT_SEED;
        let mut link = Link::Log;
        let mut covariates = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let parse_int = |v: &str| {
                v.replace('_', "")
                    .parse::<u64>()
                    .map_err(|_| bad(format!("line {}: '{v}' is not a non-negative integer", lineno + 1)))
            };
            match key.to_ascii_lowercase().as_str() {
                "beta" => {
                    let values = value
                        .split(',')
                        .map(|v| {
                            v.trim()
                                .parse::<f64>()
                                .map_err(|_| bad(format!("line {}: '{}' is not a number", lineno + 1, v.trim())))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    beta = Some(values);
                }
                "n" => n = Some(parse_int(value)? as usize),
                "replications" => replications = Some(parse_int(value)? as usize),
                "seed" => seed = parse_int(value)?,
                "link" => link = Link::from_str(value).map_err(|e| bad(e.to_string()))?,
                "covariates" => covariates = Some(value.to_string()),
                other => return Err(bad(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        let true_beta = beta.ok_or_else(|| bad("missing key 'beta'".into()))?;
        let n = n.ok_or_else(|| bad("missing key 'N'".into()))?;
        let replications = replications.ok_or_else(|| bad("missing key 'replications'".into()))?;
        let covariates = match covariates.as_deref() {
            None | Some("uniform01") => CovariateSource::Uniform01,
            Some(path) => CovariateSource::Fixed(read_matrix_csv(&base_dir.join(path))?),
        };
        let spec = Self {
            true_beta,
            covariates,
            n,
            replications,
            seed,
            link,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_config_str(&text, base).map_err(|e| match e {
            Error::InvalidScenario(msg) => Error::Parse {
                path: path.to_path_buf(),
                message: msg,
            },
            other => other,
        })
    }
}

fn read_matrix_csv(path: &PathBuf) -> Result<DMatrix<f64>> {
    let parse_err = |message: String| Error::Parse {
        path: path.clone(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(e.to_string()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(e.to_string()))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                cell.parse::<f64>()
                    .map_err(|_| parse_err(format!("row {}, column {}: '{cell}' is not a number", i + 1, j + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Err(parse_err("empty design matrix".into()));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
        return Err(parse_err(format!("row {} has {} columns, expected {ncols}", i + 1, rows[i].len())));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Independent generator for stream `index` of `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Response drawn by inversion at `mu[n] = g^{-1}(x[n]' beta)`.
pub fn simulate_response<R: Rng + ?Sized>(
    x: &DMatrix<f64>,
    beta: &DVector<f64>,
    link: Link,
    rng: &mut R,
) -> Result<Vec<f64>> {
    (x * beta)
        .iter()
        .map(|&eta| Ok(RayleighMean::new(link.inverse(eta))?.sample(rng)))
        .collect()
}

/// Outcome of [`run_replications`]: per-replication values for converged
/// fits, in replication order, and the number of failed fits.
#[derive(Debug, Clone)]
pub struct Replicated<T> {
    pub values: Vec<T>,
    pub failures: usize,
}

/// Runs every replication of `spec` and maps each converged fit through `f`.
/// Fails when more than 1% of the fits do not converge.
pub fn run_replications<T, F>(spec: &ScenarioSpec, f: F) -> Result<Replicated<T>>
where
    T: Send,
    F: Fn(&FitResult, &RegressionDataset) -> Result<T> + Sync,
{
    let x = spec.design()?;
    let base = RegressionDataset::new(vec![1.0; spec.n], x.clone())?;
    let beta = DVector::from_column_slice(&spec.true_beta);
    let options = FitOptions::default();

    let outcomes: Vec<Result<Option<T>>> = (0..spec.replications as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(spec.seed, i);
            let y = simulate_response(&x, &beta, spec.link, &mut rng)?;
            let data = base.with_response(y)?;
            let fit = fit_mle(&data, spec.link, &options)?;
            if fit.converged {
                f(&fit, &data).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect();

    let mut values = Vec::with_capacity(spec.replications);
    let mut failures = 0;
    for outcome in outcomes {
        match outcome? {
            Some(v) => values.push(v),
            None => failures += 1,
        }
    }
    if failures as f64 > MAX_FAILURE_FRACTION * spec.replications as f64 {
        return Err(Error::TooManyFailures {
            failures,
            replications: spec.replications,
        });
    }
    Ok(Replicated { values, failures })
}

/// Estimator quality over the replications of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub true_beta: Vec<f64>,
    pub n: usize,
    pub seed: u64,
    pub mean: Vec<f64>,
    /// `(beta* - mean) / beta* * 100`.
    pub rb_percent: Vec<f64>,
    pub mse: Vec<f64>,
    pub replications_used: usize,
    /// Non-converged replications, excluded from the summary.
    pub failures: usize,
}

impl McSummary {
    /// Table with one row per measure (`Mean`, `RB(%)`, `MSE`) and one column
    /// per coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Measures");
        for i in 1..=self.true_beta.len() {
            let _ = write!(out, ",beta_{i}");
        }
        out.push('\n');
        for (label, row) in [("Mean", &self.mean), ("RB(%)", &self.rb_percent), ("MSE", &self.mse)] {
            out.push_str(label);
            for v in row {
                out.push(',');
                out.push_str(&format_significant(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Mean, percentage relative bias and MSE of the MLE over the scenario's replications.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<McSummary> {
    let runs = run_replications(spec, |fit, _| Ok(fit.beta_hat.clone()))?;
    let r = spec.true_beta.len();
    let used = runs.values.len();
    let count = used as f64;
    let mut mean = vec![0.0; r];
    let mut mse = vec![0.0; r];
    for beta_hat in &runs.values {
        for j in 0..r {
            mean[j] += beta_hat[j];
            let e = beta_hat[j] - spec.true_beta[j];
            mse[j] += e * e;
        }
    }
    mean.iter_mut().for_each(|m| *m /= count);
    mse.iter_mut().for_each(|m| *m /= count);
    let rb_percent = spec
        .true_beta
        .iter()
        .zip(&mean)
        .map(|(b, m)| (b - m) / b * 100.0)
        .collect();
    Ok(McSummary {
        true_beta: spec.true_beta.clone(),
        n: spec.n,
        seed: spec.seed,
        mean,
        rb_percent,
        mse,
        replications_used: used,
        failures: runs.failures,
    })
}

/// Fraction of converged replications in which the Wald test rejects.
pub fn rejection_rate(spec: &ScenarioSpec, hypothesis: &HypothesisSpec) -> Result<f64> {
    let runs = run_replications(spec, |fit, _| Ok(wald_test(fit, hypothesis)?.reject))?;
    let rejects = runs.values.iter().filter(|&&r| r).count();
    Ok(rejects as f64 / runs.values.len() as f64)
}

/// Empirical size of the Wald test: requires the scenario to satisfy the null.
pub fn empirical_test_size(spec: &ScenarioSpec, hypothesis: &HypothesisSpec) -> Result<f64> {
    for (&i, &b0) in hypothesis.interest().iter().zip(hypothesis.null_values()) {
        match spec.true_beta.get(i) {
            Some(&b) if b == b0 => {}
            Some(&b) => {
                return Err(Error::InvalidHypothesis(format!(
                    "scenario has beta[{i}] = {b}, null value is {b0}"
                )))
            }
            None => return Err(Error::InvalidHypothesis(format!("coefficient index {i} out of range"))),
        }
    }
    rejection_rate(spec, hypothesis)
}
