//! Shared fixtures for the benchmarks.

use estbias::{draw_actuals, EstimationRecord, LogNormalEffort, SimulationConfig};

/// A reproducible dataset of log-normal actuals against a fixed estimate.
pub fn synthetic_records(n: usize, seed: u64) -> Vec<EstimationRecord> {
    let dist = LogNormalEffort::from_mean_sd(236.0, 126.0).expect("valid parameters");
    let cfg = SimulationConfig::new(n, seed);
    draw_actuals(&dist, &cfg)
        .into_iter()
        .enumerate()
        .map(|(i, actual)| {
            EstimationRecord::new(format!("p{i}"), 209.0, actual).expect("positive draw")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_reproducible() {
        let a = synthetic_records(100, 5);
        let b = synthetic_records(100, 5);
        assert_eq!(a.len(), 100);
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.actual > 0.0));
    }
}
