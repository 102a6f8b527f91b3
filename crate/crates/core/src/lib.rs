//! Measurement of software-effort estimation bias.
//!
//! Whether a set of effort estimates looks biased depends on what the
//! estimates were meant to represent and on which measure is used to judge
//! them: every bias measure rewards one particular statistical functional of
//! the effort distribution, and only estimates of that functional score an
//! expected bias of zero. This crate provides:
//!
//! - the seven bias measures over datasets of (estimated, actual) records
//!   ([`measures`]), with the static table of which functional each rewards;
//! - effort-distribution models with closed-form statistics
//!   ([`distributions`]): log-normal, the exact two-dice-product
//!   distribution, and empirical samples;
//! - a seeded, bit-reproducible Monte Carlo engine ([`simulation`]);
//! - closed-form results and solvers ([`analysis`]): the ratio-expectation
//!   approximation, the variance penalty of relative error against actuals,
//!   zero-bias estimates and functional-elicitation scans;
//! - percentile hit-rate calibration ([`calibration`]).
//!
//! Sign convention throughout: positive bias means under-estimation (actual
//! effort exceeded the estimate).

pub mod analysis;
pub mod calibration;
pub mod distributions;
pub mod error;
pub mod measures;
pub mod simulation;

pub use analysis::{
    elicitation_scan, pert_mean, ratio_expectation_approx, re_act_bias_of_mean_estimate,
    zero_bias_estimate, zero_bias_estimate_simulated, ElicitationMethod, ElicitationResult,
    MeanEstimateReActBias, PertInputs, RatioMoments, DEFAULT_MATCH_TOLERANCE,
};
pub use calibration::{percentile_hit_rate, HitRateReport};
pub use distributions::{
    parse_dist_spec, DiceAtom, DiceProduct, EffortDist, EffortDistribution, Empirical,
    LogNormalEffort,
};
pub use error::{Error, Result};
pub use measures::{
    bias_suite, compute_bias, per_record_score, Aggregation, BiasMeasure, BiasReport, EstimateType,
    EstimationRecord, MatchedFunctional, PerRecordForm,
};
pub use simulation::{
    bias_curve, draw_actuals, expected_bias_exact, reproduce_figure1, simulate_expected_bias,
    BiasCurvePoint, EstimateLabel, Figure1Row, SimulationConfig, DEFAULT_SEED,
};

/// Positivity check that also rejects NaN and infinities.
pub(crate) fn is_positive_finite(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}
