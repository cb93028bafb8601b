//! The Rayleigh distribution indexed by its mean.
//!
//! With mean `mu`, the density is
//! `f(y) = (pi y / (2 mu^2)) exp(-pi y^2 / (4 mu^2))` for `y >= 0`.
//! The classical scale parameter is recovered as `sigma = mu * sqrt(2 / pi)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::Rng;

use crate::error::{Error, Result};

/// Rayleigh distribution with mean `mu > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighMean {
    mu: f64,
}

impl RayleighMean {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::domain("mu", mu, "(0, inf)"));
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Classical scale parameter `sigma = mu * sqrt(2/pi)`.
    pub fn sigma(&self) -> f64 {
        self.mu * (2.0 / PI).sqrt()
    }

    /// Density at `y`; exactly zero at the origin.
    pub fn pdf(&self, y: f64) -> Result<f64> {
        check_support(y)?;
        if y == 0.0 {
            return Ok(0.0);
        }
        let mu2 = self.mu * self.mu;
        Ok(FRAC_PI_2 * y / mu2 * (-FRAC_PI_4 * y * y / mu2).exp())
    }

    /// Log-density for `y > 0`. The origin is excluded since the value there is `-inf`.
    pub fn log_pdf(&self, y: f64) -> Result<f64> {
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::domain("y", y, "(0, inf)"));
        }
        Ok(log_density(y, self.mu))
    }

    pub fn cdf(&self, y: f64) -> Result<f64> {
        check_support(y)?;
        let z = y / self.mu;
        Ok(-(-FRAC_PI_4 * z * z).exp_m1())
    }

    /// Inverse of [`cdf`](Self::cdf) on `[0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::domain("u", u, "[0, 1)"));
        }
        Ok(self.quantile_unchecked(u))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        // -ln(1 - u) without cancellation for small u
        2.0 * self.mu * (-(-u).ln_1p() / PI).sqrt()
    }

    /// One draw by inversion. Exact-zero draws are rejected and redrawn, so the
    /// result is always strictly positive.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.random();
            let y = self.quantile_unchecked(u);
            if y > 0.0 {
                return y;
            }
        }
    }

    /// `(mean, variance) = (mu, mu^2 (4/pi - 1))`.
    pub fn moments(&self) -> (f64, f64) {
        (self.mu, self.mu * self.mu * (4.0 / PI - 1.0))
    }
}

fn check_support(y: f64) -> Result<()> {
    if y.is_finite() && y >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain("y", y, "[0, inf)"))
    }
}

/// Log-density without argument checks; shared with the likelihood.
#[inline]
pub(crate) fn log_density(y: f64, mu: f64) -> f64 {
    let mu2 = mu * mu;
    FRAC_PI_2.ln() + y.ln() - mu2.ln() - FRAC_PI_4 * y * y / mu2
}
