//! Empirical effort distribution backed by an observed sample.

use rand::distr::{Distribution, Uniform};
use rand::RngCore;

use crate::distributions::EffortDistribution;
use crate::error::{Error, Result};

/// Uniform distribution over an observed sample of positive efforts.
///
/// Statistics are those of the sample viewed as a discrete distribution with
/// equal weight on every point. The mode is the midpoint of the densest
/// fixed-width bin (Freedman-Diaconis width) and only feeds diagnostics.
#[derive(Debug, Clone)]
pub struct Empirical {
    /// Kept sorted; sampling and order statistics both use it.
    sorted: Vec<f64>,
    index: Uniform<usize>,
}

impl Empirical {
    /// Build from a non-empty collection of positive, finite reals.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter(
                "empirical distribution needs at least one sample".into(),
            ));
        }
        if let Some(bad) = samples.iter().find(|x| !crate::is_positive_finite(**x)) {
            return Err(Error::InvalidParameter(format!(
                "empirical samples must be positive finite reals, got {bad}"
            )));
        }
        let mut sorted = samples;
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
        let index = Uniform::new(0, sorted.len()).expect("non-empty range");
        Ok(Empirical { sorted, index })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sorted view of the underlying sample.
    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Linear-interpolation quantile of the sorted sample (type 7).
    fn sample_quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        if n == 1 {
            return self.sorted[0];
        }
        let h = p * (n - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        let frac = h - lo as f64;
        self.sorted[lo] + frac * (self.sorted[hi] - self.sorted[lo])
    }
}

impl EffortDistribution for Empirical {
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.sorted[self.index.sample(rng)]
    }

    fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.sorted.len() as f64
    }

    fn median(&self) -> f64 {
        let n = self.sorted.len();
        if n % 2 == 1 {
            self.sorted[n / 2]
        } else {
            (self.sorted[n / 2 - 1] + self.sorted[n / 2]) / 2.0
        }
    }

    /// Midpoint of the densest Freedman-Diaconis bin; ties take the lowest
    /// bin. Degenerates to the median when the bin width collapses.
    fn mode(&self) -> f64 {
        let n = self.sorted.len();
        let iqr = self.sample_quantile(0.75) - self.sample_quantile(0.25);
        let width = 2.0 * iqr / (n as f64).cbrt();
        let min = self.sorted[0];
        let max = self.sorted[n - 1];
        if !crate::is_positive_finite(width) || max == min {
            return self.median();
        }
        let n_bins = ((max - min) / width).ceil() as usize + 1;
        let mut counts = vec![0usize; n_bins];
        for &x in &self.sorted {
            let k = (((x - min) / width) as usize).min(n_bins - 1);
            counts[k] += 1;
        }
        let densest = counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(k, _)| k)
            .unwrap_or(0);
        min + (densest as f64 + 0.5) * width
    }

    /// Population form: the variance of the uniform-atom distribution.
    fn variance(&self) -> f64 {
        let mean = self.mean();
        self.sorted
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .sum::<f64>()
            / self.sorted.len() as f64
    }

    fn reciprocal_mean(&self) -> f64 {
        self.sorted.iter().map(|x| 1.0 / x).sum::<f64>() / self.sorted.len() as f64
    }

    fn cdf(&self, x: f64) -> f64 {
        let below = self.sorted.partition_point(|v| *v <= x);
        below as f64 / self.sorted.len() as f64
    }

    fn support_atoms(&self) -> Option<Vec<(f64, f64)>> {
        let p = 1.0 / self.sorted.len() as f64;
        Some(self.sorted.iter().map(|&x| (x, p)).collect())
    }
}
