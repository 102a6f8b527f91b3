//! Closed-form results and solvers: the ratio-expectation approximation, the
//! variance penalty of relative error against actuals, zero-bias estimates,
//! functional-elicitation scans, and the PERT three-point mean.

use serde::Serialize;

use crate::distributions::EffortDistribution;
use crate::error::{Error, Result};
use crate::measures::{Aggregation, BiasMeasure, MatchedFunctional, PerRecordForm};
use crate::simulation::{draw_actuals, validate_grid, SimulationConfig};

/// Relative tolerance of bisection on estimates.
const ROOT_REL_TOL: f64 = 1e-6;

/// Default relative tolerance when matching an optimal estimate to a named
/// functional.
pub const DEFAULT_MATCH_TOLERANCE: f64 = 0.01;

/// First and second moments of a ratio's numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioMoments {
    pub mu_x: f64,
    pub mu_y: f64,
    pub var_y: f64,
    pub cov_xy: f64,
}

/// Second-order approximation of `E[X/Y]`:
/// `mu_x/mu_y - cov(X,Y)/mu_y^2 + var(Y) * mu_x / mu_y^3`.
pub fn ratio_expectation_approx(m: &RatioMoments) -> Result<f64> {
    if m.mu_y == 0.0 || !m.mu_y.is_finite() {
        return Err(Error::ZeroDenominatorMean);
    }
    if m.var_y.is_nan() || m.var_y < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "var_y must be non-negative, got {}",
            m.var_y
        )));
    }
    let mu_y2 = m.mu_y * m.mu_y;
    Ok(m.mu_x / m.mu_y - m.cov_xy / mu_y2 + m.var_y * m.mu_x / (mu_y2 * m.mu_y))
}

/// Expected mean relative error against actuals when the estimate equals the
/// distribution mean, stated in the signed convention (negative = measured
/// over-estimation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanEstimateReActBias {
    /// `-variance / mean^2`, from the ratio-expectation approximation.
    pub approx: f64,
    /// `1 - mean * E[1/X]`, the closed form.
    pub exact: f64,
}

/// The bias that relative error against actuals assigns to perfect estimates
/// of the mean. Grows with the variance of actual effort; zero only for a
/// variance-free distribution.
pub fn re_act_bias_of_mean_estimate<D: EffortDistribution + ?Sized>(
    dist: &D,
) -> MeanEstimateReActBias {
    let mean = dist.mean();
    MeanEstimateReActBias {
        approx: -dist.variance() / (mean * mean),
        exact: 1.0 - mean * dist.reciprocal_mean(),
    }
}

/// The estimate with zero expected bias under `measure`, from closed-form
/// statistics: the distribution mean for mean-matching measures, the median
/// for median-matching ones, and `1/E[1/X]` for relative error against
/// actuals.
pub fn zero_bias_estimate<D: EffortDistribution + ?Sized>(dist: &D, measure: BiasMeasure) -> f64 {
    match measure.matched_functional() {
        MatchedFunctional::Mean => dist.mean(),
        MatchedFunctional::Median => dist.median(),
        MatchedFunctional::HarmonicPoint => dist.harmonic_point(),
    }
}

/// Zero-bias estimate found by bracketing and bisecting the simulated bias
/// curve with a fixed seed. For distributions whose statistics are all
/// available, [`zero_bias_estimate`] is exact and preferred; this path exists
/// for cross-checks and for models that cannot provide a needed statistic.
pub fn zero_bias_estimate_simulated<D: EffortDistribution + Sync + ?Sized>(
    dist: &D,
    measure: BiasMeasure,
    cfg: &SimulationConfig,
) -> Result<f64> {
    let draws = SimulatedBias::new(dist, measure, cfg)?;
    let start = dist.median();
    let (lo, hi) = bracket_zero(|e| draws.at(e), start)?;
    Ok(bisect(|e| draws.at(e), lo, hi))
}

/// Expected-bias evaluator over one fixed draw set.
struct SimulatedBias {
    measure: BiasMeasure,
    draws: Vec<f64>,
    central: (f64, f64),
}

impl SimulatedBias {
    fn new<D: EffortDistribution + Sync + ?Sized>(
        dist: &D,
        measure: BiasMeasure,
        cfg: &SimulationConfig,
    ) -> Result<Self> {
        if cfg.n_draws == 0 {
            return Err(Error::InvalidParameter("n_draws must be at least 1".into()));
        }
        let draws = draw_actuals(dist, cfg);
        let mut sorted = draws.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
        let n = sorted.len();
        let central = if n % 2 == 1 {
            (sorted[n / 2], sorted[n / 2])
        } else {
            (sorted[n / 2 - 1], sorted[n / 2])
        };
        Ok(SimulatedBias {
            measure,
            draws,
            central,
        })
    }

    fn at(&self, estimate: f64) -> f64 {
        let form = self.measure.per_record_form();
        match self.measure.aggregation() {
            Aggregation::Mean => {
                self.draws
                    .iter()
                    .map(|&a| form.score(estimate, a))
                    .sum::<f64>()
                    / self.draws.len() as f64
            }
            Aggregation::Median => {
                (form.score(estimate, self.central.0) + form.score(estimate, self.central.1)) / 2.0
            }
        }
    }
}

/// Scan a geometric ladder around `start` for two consecutive points whose
/// bias values change sign.
fn bracket_zero(f: impl Fn(f64) -> f64, start: f64) -> Result<(f64, f64)> {
    const MAX_DOUBLINGS: i32 = 40;
    let mut prev_x = start * 2f64.powi(-MAX_DOUBLINGS);
    let mut prev_f = f(prev_x);
    for k in (-MAX_DOUBLINGS + 1)..=MAX_DOUBLINGS {
        let x = start * 2f64.powi(k);
        let fx = f(x);
        if prev_f == 0.0 {
            return Ok((prev_x, prev_x));
        }
        if fx == 0.0 {
            return Ok((x, x));
        }
        if prev_f.signum() != fx.signum() {
            return Ok((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    Err(Error::BracketFailed {
        lo: start * 2f64.powi(-MAX_DOUBLINGS),
        hi: start * 2f64.powi(MAX_DOUBLINGS),
    })
}

/// Bisection to [`ROOT_REL_TOL`] relative width. `lo == hi` short-circuits.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= ROOT_REL_TOL * mid.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// How an elicitation scan obtained its curve and optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ElicitationMethod {
    /// Expected bias evaluated by exact enumeration of a finite support.
    Exact,
    /// Simulated curve, optimum refined by bisecting a sign change.
    RootFind,
    /// Simulated curve, best grid point reported as-is.
    GridScan,
}

/// Outcome of scanning a grid of estimates for the one a measure rewards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElicitationResult {
    pub measure: BiasMeasure,
    /// Grid point minimizing the absolute expected bias.
    pub optimal_estimate: f64,
    /// Absolute expected bias at `optimal_estimate`.
    pub min_abs_bias: f64,
    /// Continuous zero crossing adjacent to the optimum, when one was
    /// bracketed.
    pub refined_root: Option<f64>,
    /// The named functional within the match tolerance of
    /// `optimal_estimate`, if any.
    pub matched_functional: Option<MatchedFunctional>,
    pub method: ElicitationMethod,
}

/// Scan `grid` for the estimate minimizing `|expected bias|` under `measure`.
///
/// Distributions with a finite support are enumerated exactly; others are
/// simulated on one shared draw set. A zero crossing adjacent to the best
/// grid point is refined by bisection. `match_tol` is the relative tolerance
/// for naming the functional the optimum coincides with.
pub fn elicitation_scan<D: EffortDistribution + Sync + ?Sized>(
    dist: &D,
    measure: BiasMeasure,
    grid: &[f64],
    cfg: &SimulationConfig,
    match_tol: f64,
) -> Result<ElicitationResult> {
    validate_grid(grid)?;
    if !crate::is_positive_finite(grid[0]) {
        return Err(Error::InvalidEstimate(grid[0]));
    }

    enum Curve<'a> {
        Exact {
            mean_act: f64,
            recip_mean: f64,
            mean_log: f64,
            median: f64,
        },
        Simulated(&'a SimulatedBias),
    }
    impl Curve<'_> {
        fn at(&self, measure: BiasMeasure, e: f64) -> f64 {
            let form = measure.per_record_form();
            match self {
                Curve::Exact {
                    mean_act,
                    recip_mean,
                    mean_log,
                    median,
                } => match measure.aggregation() {
                    Aggregation::Median => form.score(e, *median),
                    Aggregation::Mean => match form {
                        PerRecordForm::Deviation => mean_act - e,
                        PerRecordForm::RelToEstimate => (mean_act - e) / e,
                        PerRecordForm::RelToActual => 1.0 - e * recip_mean,
                        PerRecordForm::LogRatio => mean_log - e.ln(),
                    },
                },
                Curve::Simulated(sim) => sim.at(e),
            }
        }
    }

    let exact = dist.support_atoms().is_some();
    let sim_store;
    let curve = if let Some(atoms) = dist.support_atoms() {
        Curve::Exact {
            mean_act: dist.mean(),
            recip_mean: dist.reciprocal_mean(),
            mean_log: atoms.iter().map(|(x, p)| p * x.ln()).sum(),
            median: dist.median(),
        }
    } else {
        sim_store = SimulatedBias::new(dist, measure, cfg)?;
        Curve::Simulated(&sim_store)
    };

    let biases: Vec<f64> = grid.iter().map(|&e| curve.at(measure, e)).collect();
    let best = biases
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1.abs()
                .partial_cmp(&b.1.abs())
                .expect("bias values are finite")
        })
        .map(|(i, _)| i)
        .expect("grid is non-empty");

    let optimal_estimate = grid[best];
    let min_abs_bias = biases[best].abs();

    // Refine the crossing adjacent to the best grid point, if there is one.
    let refined_root = if biases[best] == 0.0 {
        Some(optimal_estimate)
    } else {
        let mut root = None;
        for (i, j) in [(best.wrapping_sub(1), best), (best, best + 1)] {
            if i < grid.len() && j < grid.len() && biases[i].signum() != biases[j].signum() {
                root = Some(bisect(|e| curve.at(measure, e), grid[i], grid[j]));
                break;
            }
        }
        root
    };

    let matched_functional = match_functional(dist, optimal_estimate, match_tol);
    let method = if exact {
        ElicitationMethod::Exact
    } else if refined_root.is_some() {
        ElicitationMethod::RootFind
    } else {
        ElicitationMethod::GridScan
    };

    Ok(ElicitationResult {
        measure,
        optimal_estimate,
        min_abs_bias,
        refined_root,
        matched_functional,
        method,
    })
}

fn match_functional<D: EffortDistribution + ?Sized>(
    dist: &D,
    estimate: f64,
    match_tol: f64,
) -> Option<MatchedFunctional> {
    let candidates = [
        (MatchedFunctional::Mean, dist.mean()),
        (MatchedFunctional::Median, dist.median()),
        (MatchedFunctional::HarmonicPoint, dist.harmonic_point()),
    ];
    candidates
        .iter()
        .filter(|(_, value)| (estimate - value).abs() <= match_tol * value.abs())
        .min_by(|a, b| {
            let da = (estimate - a.1).abs() / a.1.abs();
            let db = (estimate - b.1).abs() / b.1.abs();
            da.partial_cmp(&db).expect("finite statistics")
        })
        .map(|(functional, _)| *functional)
}

/// Three-point effort inputs: minimum, most likely, and maximum effort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PertInputs {
    pub min_effort: f64,
    pub most_likely: f64,
    pub max_effort: f64,
}

impl PertInputs {
    pub fn new(min_effort: f64, most_likely: f64, max_effort: f64) -> Result<Self> {
        let ordered = min_effort > 0.0
            && min_effort.is_finite()
            && max_effort.is_finite()
            && min_effort <= most_likely
            && most_likely <= max_effort;
        if !ordered {
            return Err(Error::InvalidPertOrder {
                min: min_effort,
                most_likely,
                max: max_effort,
            });
        }
        Ok(PertInputs {
            min_effort,
            most_likely,
            max_effort,
        })
    }
}

/// The three-point mean: `(min + 4 * most likely + max) / 6`.
pub fn pert_mean(inputs: &PertInputs) -> f64 {
    (inputs.min_effort + 4.0 * inputs.most_likely + inputs.max_effort) / 6.0
}
