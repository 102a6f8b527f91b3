//! Seeded Monte Carlo engine for expected-bias estimation.
//!
//! Draws are generated in fixed-size blocks; block `k` comes from its own
//! ChaCha stream derived from `(seed, k)`. The draw sequence therefore
//! depends only on `(seed, n_draws)` — never on thread count or scheduling —
//! and any two computations with the same config see bit-identical actuals
//! (common random numbers for free).

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{EffortDistribution, LogNormalEffort};
use crate::error::{Error, Result};
use crate::measures::{Aggregation, BiasMeasure, PerRecordForm};

/// Draws per generator stream. Fixed: changing it would change the draw
/// sequence, so it is not a tuning knob.
const DRAW_BLOCK: usize = 4096;

/// Monte Carlo configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimulationConfig {
    /// Number of project executions to draw.
    pub n_draws: usize,
    /// Seed of the whole draw sequence.
    pub seed: u64,
    /// Minimum draws per parallel task. Scheduling granularity only; results
    /// are identical for any value.
    pub chunk_size: usize,
}

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0;

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            n_draws: 10_000,
            seed: DEFAULT_SEED,
            chunk_size: 4096,
        }
    }
}

impl SimulationConfig {
    pub fn new(n_draws: usize, seed: u64) -> Self {
        SimulationConfig {
            n_draws,
            seed,
            ..SimulationConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_draws == 0 {
            return Err(Error::InvalidParameter("n_draws must be at least 1".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidParameter(
                "chunk_size must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Expected bias of one fixed estimate against a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasCurvePoint {
    pub estimate: f64,
    pub expected_bias: f64,
    /// Standard error of the estimate; only meaningful (and only present)
    /// for mean-aggregated measures.
    pub std_error: Option<f64>,
}

/// Draw `cfg.n_draws` actuals from `dist`.
///
/// Block `k` of 4096 draws comes from `ChaCha8Rng(seed)` on stream `k`;
/// blocks fill disjoint slices in parallel, so the output is
/// bit-reproducible for a fixed `(seed, n_draws)` regardless of thread count.
pub fn draw_actuals<D: EffortDistribution + Sync + ?Sized>(
    dist: &D,
    cfg: &SimulationConfig,
) -> Vec<f64> {
    let mut draws = vec![0.0f64; cfg.n_draws];
    let min_blocks = (cfg.chunk_size / DRAW_BLOCK).max(1);
    draws
        .par_chunks_mut(DRAW_BLOCK)
        .with_min_len(min_blocks)
        .enumerate()
        .for_each(|(block, slice)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(block as u64);
            for slot in slice.iter_mut() {
                let x = dist.sample(&mut rng);
                assert!(x > 0.0, "distribution produced a non-positive draw: {x}");
                *slot = x;
            }
        });
    draws
}

fn mean_and_std_error(scores: &[f64]) -> (f64, f64) {
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    if scores.len() < 2 {
        return (mean, 0.0);
    }
    let ss = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>();
    let sd = (ss / (n - 1.0)).sqrt();
    (mean, sd / n.sqrt())
}

/// Evaluate one measure against pre-drawn actuals and a fixed estimate.
///
/// `sorted_actuals` must be the ascending sort of `draws`; only
/// median-aggregated measures consult it. The per-record forms are all
/// monotone increasing in the actual, so the median of scores is the score
/// of the central actual(s).
fn bias_from_draws(
    draws: &[f64],
    sorted_actuals: &[f64],
    estimate: f64,
    measure: BiasMeasure,
) -> BiasCurvePoint {
    let form = measure.per_record_form();
    match measure.aggregation() {
        Aggregation::Mean => {
            let scores: Vec<f64> = draws.iter().map(|&a| form.score(estimate, a)).collect();
            let (mean, se) = mean_and_std_error(&scores);
            BiasCurvePoint {
                estimate,
                expected_bias: mean,
                std_error: Some(se),
            }
        }
        Aggregation::Median => {
            let n = sorted_actuals.len();
            let expected_bias = if n % 2 == 1 {
                form.score(estimate, sorted_actuals[n / 2])
            } else {
                let lo = form.score(estimate, sorted_actuals[n / 2 - 1]);
                let hi = form.score(estimate, sorted_actuals[n / 2]);
                (lo + hi) / 2.0
            };
            BiasCurvePoint {
                estimate,
                expected_bias,
                std_error: None,
            }
        }
    }
}

fn check_estimate(estimate: f64) -> Result<()> {
    if !crate::is_positive_finite(estimate) {
        return Err(Error::InvalidEstimate(estimate));
    }
    Ok(())
}

/// Estimate the expected bias of issuing `estimate` against `dist`, by
/// drawing `cfg.n_draws` actuals and scoring each against the fixed estimate.
/// Bit-reproducible for a fixed `(seed, n_draws)`.
pub fn simulate_expected_bias<D: EffortDistribution + Sync + ?Sized>(
    dist: &D,
    estimate: f64,
    measure: BiasMeasure,
    cfg: &SimulationConfig,
) -> Result<BiasCurvePoint> {
    check_estimate(estimate)?;
    cfg.validate()?;
    let draws = draw_actuals(dist, cfg);
    let sorted = match measure.aggregation() {
        Aggregation::Median => {
            let mut s = draws.clone();
            s.sort_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
            s
        }
        Aggregation::Mean => Vec::new(),
    };
    Ok(bias_from_draws(&draws, &sorted, estimate, measure))
}

/// Exact expected bias of a fixed estimate, without sampling.
///
/// Mean-aggregated measures need a finite support (`support_atoms`); their
/// expectations are affine in `E[act]` or `E[1/act]`, so the distribution's
/// own closed-form statistics keep the zero crossings exact.
/// Median-aggregated measures reduce to scoring the distribution median,
/// since every per-record form is monotone in the actual.
pub fn expected_bias_exact<D: EffortDistribution + ?Sized>(
    dist: &D,
    estimate: f64,
    measure: BiasMeasure,
) -> Result<f64> {
    check_estimate(estimate)?;
    let form = measure.per_record_form();
    match measure.aggregation() {
        Aggregation::Median => Ok(form.score(estimate, dist.median())),
        Aggregation::Mean => {
            let atoms = dist.support_atoms().ok_or(Error::NoExactEnumeration)?;
            let value = match form {
                PerRecordForm::Deviation => dist.mean() - estimate,
                PerRecordForm::RelToEstimate => (dist.mean() - estimate) / estimate,
                PerRecordForm::RelToActual => 1.0 - estimate * dist.reciprocal_mean(),
                PerRecordForm::LogRatio => {
                    let mean_log: f64 = atoms.iter().map(|(x, p)| p * x.ln()).sum();
                    mean_log - estimate.ln()
                }
            };
            Ok(value)
        }
    }
}

/// Expected bias at every grid estimate, evaluated on one shared draw set
/// (common random numbers), so the curve is smooth in the estimate.
pub fn bias_curve<D: EffortDistribution + Sync + ?Sized>(
    dist: &D,
    estimates: &[f64],
    measure: BiasMeasure,
    cfg: &SimulationConfig,
) -> Result<Vec<BiasCurvePoint>> {
    validate_grid(estimates)?;
    cfg.validate()?;
    let draws = draw_actuals(dist, cfg);
    let sorted = match measure.aggregation() {
        Aggregation::Median => {
            let mut s = draws.clone();
            s.sort_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
            s
        }
        Aggregation::Mean => Vec::new(),
    };
    estimates
        .iter()
        .map(|&e| {
            check_estimate(e)?;
            Ok(bias_from_draws(&draws, &sorted, e, measure))
        })
        .collect()
}

pub(crate) fn validate_grid(estimates: &[f64]) -> Result<()> {
    if estimates.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for pair in estimates.windows(2) {
        if pair[0].is_nan() || pair[1].is_nan() || pair[1] <= pair[0] {
            return Err(Error::GridNotIncreasing(pair[0], pair[1]));
        }
    }
    Ok(())
}

/// A symbolic estimate, resolved against a distribution's statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimateLabel {
    Mode,
    Median,
    Mean,
    Harmonic,
}

impl EstimateLabel {
    pub const ALL: [EstimateLabel; 4] = [
        EstimateLabel::Mode,
        EstimateLabel::Median,
        EstimateLabel::Mean,
        EstimateLabel::Harmonic,
    ];

    pub fn resolve<D: EffortDistribution + ?Sized>(self, dist: &D) -> f64 {
        match self {
            EstimateLabel::Mode => dist.mode(),
            EstimateLabel::Median => dist.median(),
            EstimateLabel::Mean => dist.mean(),
            EstimateLabel::Harmonic => dist.harmonic_point(),
        }
    }
}

impl fmt::Display for EstimateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EstimateLabel::Mode => "mode",
            EstimateLabel::Median => "median",
            EstimateLabel::Mean => "mean",
            EstimateLabel::Harmonic => "harmonic",
        };
        f.write_str(s)
    }
}

impl FromStr for EstimateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mode" => Ok(EstimateLabel::Mode),
            "median" => Ok(EstimateLabel::Median),
            "mean" => Ok(EstimateLabel::Mean),
            "harmonic" => Ok(EstimateLabel::Harmonic),
            other => Err(Error::InvalidParameter(format!(
                "unknown estimate label `{other}` (expected mode, median, mean or harmonic)"
            ))),
        }
    }
}

/// One row of the repeated-execution experiment table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Figure1Row {
    pub label: EstimateLabel,
    pub estimate: f64,
    pub expected_re_act: f64,
    pub std_error: f64,
}

/// Run the repeated-execution experiment: a log-normal project (mean 236,
/// sd 126 work-hours) is executed `cfg.n_draws` times, and the expected
/// mean relative error against actuals is evaluated for the mode, median,
/// mean and harmonic-point estimates, all on one shared draw set.
pub fn reproduce_figure1(cfg: &SimulationConfig) -> Result<Vec<Figure1Row>> {
    let dist = LogNormalEffort::from_mean_sd(236.0, 126.0).expect("canonical parameters");
    cfg.validate()?;
    let draws = draw_actuals(&dist, cfg);
    EstimateLabel::ALL
        .iter()
        .map(|&label| {
            let estimate = label.resolve(&dist);
            let point = bias_from_draws(&draws, &[], estimate, BiasMeasure::MeanReAct);
            Ok(Figure1Row {
                label,
                estimate,
                expected_re_act: point.expected_bias,
                std_error: point.std_error.unwrap_or(0.0),
            })
        })
        .collect()
}
