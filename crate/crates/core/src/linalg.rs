//! Small dense symmetric positive-definite helpers built on nalgebra's Cholesky.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Smallest accepted ratio between the squared smallest and largest Cholesky pivots.
const PIVOT_RATIO: f64 = 1e-13;

/// Cholesky factor of a symmetric positive-definite matrix, rejecting
/// numerically singular inputs.
pub fn spd_factor(m: &DMatrix<f64>, what: &'static str) -> Result<Cholesky<f64, Dyn>> {
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::NotPositiveDefinite(what));
    }
    let chol = m.clone().cholesky().ok_or(Error::NotPositiveDefinite(what))?;
    let diag = chol.l_dirty().diagonal();
    let max = diag.iter().fold(0.0f64, |a, &b| a.max(b));
    let min = diag.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if !(min > 0.0) || (min * min) < PIVOT_RATIO * (max * max) {
        return Err(Error::NotPositiveDefinite(what));
    }
    Ok(chol)
}

/// Inverse of a symmetric positive-definite matrix, symmetrized.
pub fn spd_inverse(m: &DMatrix<f64>, what: &'static str) -> Result<DMatrix<f64>> {
    let inv = spd_factor(m, what)?.inverse();
    Ok((&inv + inv.transpose()) * 0.5)
}

/// Least-squares coefficients of `y` on the columns of `x` via the normal equations.
pub fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let xtx = x.tr_mul(x);
    let chol = spd_factor(&xtx, "X'X").map_err(|_| Error::RankDeficient)?;
    Ok(chol.solve(&x.tr_mul(y)))
}
