//! Log-normal effort distribution with closed-form statistics.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::distributions::EffortDistribution;
use crate::error::{Error, Result};

/// Log-normal model of effort usage: `ln(X) ~ Normal(mu_log, sigma_log)`.
///
/// Right-skewed with strictly positive support, which is why it is the
/// canonical shape for effort-usage uncertainty here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormalEffort {
    mu_log: f64,
    sigma_log: f64,
}

impl LogNormalEffort {
    /// Build from the log-scale parameters directly.
    pub fn new(mu_log: f64, sigma_log: f64) -> Result<Self> {
        if !mu_log.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mu_log must be finite, got {mu_log}"
            )));
        }
        if !crate::is_positive_finite(sigma_log) {
            return Err(Error::InvalidParameter(format!(
                "sigma_log must be positive and finite, got {sigma_log}"
            )));
        }
        Ok(LogNormalEffort { mu_log, sigma_log })
    }

    /// Invert the moment identities: `sigma_log^2 = ln(1 + (sd/mean)^2)`,
    /// `mu_log = ln(mean) - sigma_log^2 / 2`. Round-trips `mean()` and
    /// `variance()` to floating-point accuracy.
    pub fn from_mean_sd(mean: f64, sd: f64) -> Result<Self> {
        if !crate::is_positive_finite(mean) {
            return Err(Error::InvalidParameter(format!(
                "mean must be positive, got {mean}"
            )));
        }
        if !crate::is_positive_finite(sd) {
            return Err(Error::InvalidParameter(format!(
                "sd must be positive, got {sd}"
            )));
        }
        let ratio = sd / mean;
        let sigma_sq = (1.0 + ratio * ratio).ln();
        let mu_log = mean.ln() - sigma_sq / 2.0;
        LogNormalEffort::new(mu_log, sigma_sq.sqrt())
    }

    /// Alternate parameterization: `mu_log = ln(median)`,
    /// `sigma_log^2 = 2 ln(mean / median)`. Requires `mean > median`.
    pub fn from_mean_median(mean: f64, median: f64) -> Result<Self> {
        if !crate::is_positive_finite(median) {
            return Err(Error::InvalidParameter(format!(
                "median must be positive, got {median}"
            )));
        }
        if mean.is_nan() || mean <= median {
            return Err(Error::InvalidParameter(format!(
                "a log-normal requires mean > median, got mean {mean}, median {median}"
            )));
        }
        let sigma_sq = 2.0 * (mean / median).ln();
        LogNormalEffort::new(median.ln(), sigma_sq.sqrt())
    }

    pub fn mu_log(&self) -> f64 {
        self.mu_log
    }

    pub fn sigma_log(&self) -> f64 {
        self.sigma_log
    }

    fn standard_normal() -> Normal {
        Normal::new(0.0, 1.0).expect("unit normal is always valid")
    }
}

impl EffortDistribution for LogNormalEffort {
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        (self.mu_log + self.sigma_log * z).exp()
    }

    fn mean(&self) -> f64 {
        (self.mu_log + 0.5 * self.sigma_log * self.sigma_log).exp()
    }

    fn median(&self) -> f64 {
        self.mu_log.exp()
    }

    fn mode(&self) -> f64 {
        (self.mu_log - self.sigma_log * self.sigma_log).exp()
    }

    fn variance(&self) -> f64 {
        let s2 = self.sigma_log * self.sigma_log;
        (s2.exp() - 1.0) * (2.0 * self.mu_log + s2).exp()
    }

    fn reciprocal_mean(&self) -> f64 {
        // 1/X is log-normal with location -mu_log and the same scale.
        (-self.mu_log + 0.5 * self.sigma_log * self.sigma_log).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = (x.ln() - self.mu_log) / self.sigma_log;
        Self::standard_normal().cdf(z)
    }

    fn quantile(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0, "quantile needs p in (0, 1), got {p}");
        (self.mu_log + self.sigma_log * Self::standard_normal().inverse_cdf(p)).exp()
    }
}
