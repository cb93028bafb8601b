//! Link functions mapping the mean to the linear predictor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A strictly monotone, twice differentiable map `eta = g(mu)` on `mu > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    #[default]
    Log,
}

impl Link {
    /// `g(mu)`.
    #[inline]
    pub fn link(self, mu: f64) -> f64 {
        match self {
            Link::Log => mu.ln(),
        }
    }

    /// `g^{-1}(eta)`.
    #[inline]
    pub fn inverse(self, eta: f64) -> f64 {
        match self {
            Link::Log => eta.exp(),
        }
    }

    /// `g'(mu)`.
    #[inline]
    pub fn derivative(self, mu: f64) -> f64 {
        match self {
            Link::Log => 1.0 / mu,
        }
    }

    /// `d mu / d eta = 1 / g'(mu)` expressed through the mean.
    #[inline]
    pub fn mu_eta(self, mu: f64) -> f64 {
        1.0 / self.derivative(mu)
    }

    /// `ln(g^{-1}(eta + delta) / g^{-1}(eta))`, accurate for small `delta`.
    #[inline]
    pub fn log_mean_ratio(self, eta: f64, delta: f64) -> f64 {
        match self {
            Link::Log => delta,
            #[allow(unreachable_patterns)]
            _ => (self.inverse(eta + delta) / self.inverse(eta)).ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Link::Log => "log",
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown link function '{0}' (available: log)")]
pub struct UnknownLink(pub String);

impl FromStr for Link {
    type Err = UnknownLink;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "log" => Ok(Link::Log),
            other => Err(UnknownLink(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_link_roundtrip() {
        let link = Link::Log;
        let mut mu = 1e-6;
        while mu <= 1e6 {
            let back = link.inverse(link.link(mu));
            assert!((back - mu).abs() <= 1e-12 * mu, "mu = {mu}");
            mu *= 1.7;
        }
        assert_eq!(link.inverse(0.0), 1.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let link = Link::Log;
        for mu in [0.01, 0.5, 3.0, 400.0] {
            let h = 1e-6 * mu;
            let fd = (link.link(mu + h) - link.link(mu - h)) / (2.0 * h);
            assert!((fd - link.derivative(mu)).abs() < 1e-7 * link.derivative(mu));
            assert!((link.mu_eta(mu) - mu).abs() < 1e-15 * mu);
        }
    }

    #[test]
    fn parses_names() {
        assert_eq!("log".parse::<Link>().unwrap(), Link::Log);
        assert_eq!(" LOG ".parse::<Link>().unwrap(), Link::Log);
        assert!("identity".parse::<Link>().is_err());
    }
}
