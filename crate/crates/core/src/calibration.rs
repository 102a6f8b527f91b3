//! Percentile hit-rate evaluation.
//!
//! The hit rate — the fraction of observations whose actual effort did not
//! exceed the estimate — is the practical surrogate for judging estimates
//! that are meant to sit at some percentile of the effort distribution
//! (including mode estimates, for which no direct bias measure exists).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::EstimationRecord;

/// Percentile-calibration report over a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HitRateReport {
    /// Number of records evaluated.
    pub n: usize,
    /// Records with `actual <= estimated`. Ties count as hits.
    pub hits: usize,
    /// `hits / n`.
    pub hit_rate: f64,
    /// The percentile the estimates were meant to sit at, when stated.
    pub target_percentile: Option<f64>,
    /// `hit_rate - target`, when a target was stated.
    pub deviation: Option<f64>,
    /// Binomial half-width basis `sqrt(p (1 - p) / n)` at the target.
    pub binomial_band: Option<f64>,
}

impl HitRateReport {
    /// Fraction of records with `actual > estimated`; complements the hit
    /// rate exactly at the count level.
    pub fn strict_miss_rate(&self) -> f64 {
        (self.n - self.hits) as f64 / self.n as f64
    }
}

/// Count how often actual effort stayed within the estimate.
///
/// Ties (`actual == estimated`) count as hits. With continuous effort data
/// ties have probability zero; with rounded data this choice is documented
/// rather than split.
pub fn percentile_hit_rate(
    records: &[EstimationRecord],
    target_percentile: Option<f64>,
) -> Result<HitRateReport> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(p) = target_percentile {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidTarget(p));
        }
    }
    for record in records {
        record.validate()?;
    }
    let n = records.len();
    let hits = records.iter().filter(|r| r.actual <= r.estimated).count();
    let hit_rate = hits as f64 / n as f64;
    let deviation = target_percentile.map(|p| hit_rate - p);
    let binomial_band = target_percentile.map(|p| (p * (1.0 - p) / n as f64).sqrt());
    Ok(HitRateReport {
        n,
        hits,
        hit_rate,
        target_percentile,
        deviation,
        binomial_band,
    })
}
