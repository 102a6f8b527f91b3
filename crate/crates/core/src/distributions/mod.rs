//! Probability models of effort usage with closed-form statistics.
//!
//! Three models are provided: a parametric log-normal, the exact
//! two-dice-product distribution, and an empirical distribution backed by a
//! sample. All expose the same statistics so that measures and solvers can
//! treat them uniformly.

mod dice;
mod empirical;
mod lognormal;
mod spec;

pub use dice::{DiceAtom, DiceProduct};
pub use empirical::Empirical;
pub use lognormal::LogNormalEffort;
pub use spec::parse_dist_spec;

use rand::RngCore;

use crate::error::Result;

/// Behavioral contract of an effort-usage distribution.
///
/// Support is strictly positive and every statistic is finite, so downstream
/// code may divide by draws and take logarithms freely.
pub trait EffortDistribution {
    /// Draw one actual effort. The generator is explicit; the distribution
    /// holds no mutable state.
    fn sample(&self, rng: &mut dyn RngCore) -> f64;

    fn mean(&self) -> f64;

    fn median(&self) -> f64;

    /// Most likely effort.
    fn mode(&self) -> f64;

    fn variance(&self) -> f64;

    /// `E[1/X]`.
    fn reciprocal_mean(&self) -> f64;

    /// `P(X <= x)`.
    fn cdf(&self, x: f64) -> f64;

    /// `1 / E[1/X]`: the estimate at which mean relative error against
    /// actuals has zero expectation. Never exceeds the mean (Jensen).
    fn harmonic_point(&self) -> f64 {
        1.0 / self.reciprocal_mean()
    }

    /// Smallest x with `cdf(x) >= p`, by bisection to 1e-9 relative.
    ///
    /// Implementations with a closed-form quantile may override; the
    /// default brackets geometrically around the median and bisects the CDF.
    fn quantile(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0, "quantile needs p in (0, 1), got {p}");
        let mut lo = self.median();
        let mut hi = lo;
        while self.cdf(lo) >= p && lo > f64::MIN_POSITIVE {
            lo /= 2.0;
        }
        while self.cdf(hi) < p && hi < f64::MAX / 4.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) <= 1e-9 * hi.abs() {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Finite support as `(value, probability)` atoms, when the distribution
    /// has one. Enables exact expectations instead of sampling.
    fn support_atoms(&self) -> Option<Vec<(f64, f64)>> {
        None
    }
}

/// A runtime-selected effort distribution, as parsed from a CLI spec string.
#[derive(Debug, Clone)]
pub enum EffortDist {
    LogNormal(LogNormalEffort),
    Dice(DiceProduct),
    Empirical(Empirical),
}

impl EffortDist {
    /// Parse a spec string such as `lognormal:mean=236,sd=126`, `dice` or
    /// `empirical:<path.csv>`.
    pub fn parse(spec: &str) -> Result<Self> {
        parse_dist_spec(spec)
    }

    fn inner(&self) -> &dyn EffortDistribution {
        match self {
            EffortDist::LogNormal(d) => d,
            EffortDist::Dice(d) => d,
            EffortDist::Empirical(d) => d,
        }
    }
}

impl EffortDistribution for EffortDist {
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.inner().sample(rng)
    }

    fn mean(&self) -> f64 {
        self.inner().mean()
    }

    fn median(&self) -> f64 {
        self.inner().median()
    }

    fn mode(&self) -> f64 {
        self.inner().mode()
    }

    fn variance(&self) -> f64 {
        self.inner().variance()
    }

    fn reciprocal_mean(&self) -> f64 {
        self.inner().reciprocal_mean()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner().cdf(x)
    }

    fn harmonic_point(&self) -> f64 {
        self.inner().harmonic_point()
    }

    fn quantile(&self, p: f64) -> f64 {
        self.inner().quantile(p)
    }

    fn support_atoms(&self) -> Option<Vec<(f64, f64)>> {
        self.inner().support_atoms()
    }
}
