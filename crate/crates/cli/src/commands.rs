//! Implementations of the six subcommands. Each returns a JSON envelope and
//! the CSV projection of its payload.

use std::path::Path;

use estbias::{
    bias_suite, elicitation_scan, expected_bias_exact, percentile_hit_rate, simulate_expected_bias,
    zero_bias_estimate, BiasMeasure, BiasReport, DiceProduct, EffortDist, EffortDistribution,
    EstimateLabel, EstimateType, EstimationRecord, MatchedFunctional, SimulationConfig,
    DEFAULT_MATCH_TOLERANCE,
};
use serde_json::json;

use crate::dataset::load_dataset;
use crate::envelope::{cell, opt_cell, sha256_hex, CsvTable, ReportEnvelope};
use crate::errors::{CliError, CliResult};

pub struct CommandOutput {
    pub envelope: ReportEnvelope,
    pub csv: CsvTable,
}

fn to_value<T: serde::Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("payload serializes")
}

/// Resolve `--measures`: the keyword `all`, or a comma-separated list.
pub fn parse_measures(raw: &[String]) -> CliResult<Vec<BiasMeasure>> {
    if raw.len() == 1 && raw[0].eq_ignore_ascii_case("all") {
        return Ok(BiasMeasure::ALL.to_vec());
    }
    let mut measures = Vec::new();
    for item in raw {
        let measure: BiasMeasure = item.parse().map_err(CliError::from)?;
        if !measures.contains(&measure) {
            measures.push(measure);
        }
    }
    if measures.is_empty() {
        return Err(CliError::usage("no measures requested"));
    }
    Ok(measures)
}

/// A fixed estimate: symbolic label or literal work-hours.
#[derive(Debug, Clone, Copy)]
pub enum EstimateArg {
    Label(EstimateLabel),
    Value(f64),
}

impl EstimateArg {
    pub fn parse(raw: &str) -> CliResult<Self> {
        if let Ok(label) = raw.parse::<EstimateLabel>() {
            return Ok(EstimateArg::Label(label));
        }
        if let Ok(value) = raw.trim().parse::<f64>() {
            return Ok(EstimateArg::Value(value));
        }
        Err(CliError::usage(format!(
            "`{raw}` is neither a number nor one of mode, median, mean, harmonic"
        )))
    }

    fn resolve(self, dist: &EffortDist) -> (Option<EstimateLabel>, f64) {
        match self {
            EstimateArg::Label(label) => (Some(label), label.resolve(dist)),
            EstimateArg::Value(v) => (None, v),
        }
    }
}

/// Parse a `lo..hi[:step]` grid spec into explicit estimates. The step
/// defaults to 1.
pub fn parse_grid(raw: &str) -> CliResult<Vec<f64>> {
    let (range, step) = match raw.split_once(':') {
        Some((range, step)) => {
            let step: f64 = step
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("grid step `{step}` is not a number")))?;
            (range, step)
        }
        None => (raw, 1.0),
    };
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| CliError::usage(format!("grid `{raw}` must look like lo..hi[:step]")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("grid start `{lo}` is not a number")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("grid end `{hi}` is not a number")))?;
    if !(lo > 0.0 && hi >= lo && step > 0.0) {
        return Err(CliError::usage(format!(
            "grid `{raw}` must satisfy 0 < lo <= hi with a positive step"
        )));
    }
    let count = ((hi - lo) / step).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::usage(format!(
            "grid `{raw}` expands to {count} points; cap is 1000000"
        )));
    }
    let mut grid = Vec::with_capacity(count);
    let mut k = 0usize;
    loop {
        let v = lo + step * k as f64;
        if v > hi + step * 1e-9 {
            break;
        }
        grid.push(v);
        k += 1;
    }
    Ok(grid)
}

fn parse_dist(spec: &str) -> CliResult<EffortDist> {
    EffortDist::parse(spec).map_err(CliError::from)
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

pub fn cmd_evaluate(
    path: &Path,
    measures_raw: &[String],
    skip_invalid: bool,
) -> CliResult<CommandOutput> {
    let measures = parse_measures(measures_raw)?;
    let dataset = load_dataset(path, skip_invalid)?;
    let mut warnings = dataset.warnings.clone();

    let overall = bias_suite(&dataset.records, &measures).map_err(CliError::from)?;

    let mut by_type = std::collections::BTreeMap::new();
    if dataset.has_type_tags {
        for tag in [
            EstimateType::Mean,
            EstimateType::Median,
            EstimateType::Mode,
            EstimateType::Unknown,
        ] {
            let group: Vec<EstimationRecord> = dataset
                .records
                .iter()
                .filter(|r| r.estimate_type == tag)
                .cloned()
                .collect();
            if group.is_empty() {
                continue;
            }
            by_type.insert(
                tag.to_string(),
                bias_suite(&group, &measures).map_err(CliError::from)?,
            );
            for &measure in &measures {
                if let Some(warning) = mismatch_warning(tag, measure) {
                    warnings.push(warning);
                }
            }
            // the mode message is measure-independent and repeats per measure
            warnings.dedup();
        }
    }

    let payload = json!({
        "n": overall.n,
        "skipped_rows": dataset.skipped_rows,
        "overall": to_value(&overall),
        "by_type": to_value(&by_type),
    });

    let mut csv = CsvTable {
        header: vec!["scope", "measure", "value", "unbiased_for", "n"],
        rows: Vec::new(),
    };
    push_report_rows(&mut csv, "all", &overall, &measures);
    for (tag, report) in &by_type {
        push_report_rows(&mut csv, tag, report, &measures);
    }

    let envelope = ReportEnvelope::new(
        "evaluate",
        json!({
            "input": path.display().to_string(),
            "measures": measures.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "skip_invalid": skip_invalid,
        }),
        dataset.digest,
        payload,
        warnings,
    );
    Ok(CommandOutput { envelope, csv })
}

fn push_report_rows(csv: &mut CsvTable, scope: &str, report: &BiasReport, order: &[BiasMeasure]) {
    for measure in order {
        csv.rows.push(vec![
            scope.to_string(),
            measure.name().to_string(),
            cell(report.values[measure]),
            report.match_notes[measure].to_string(),
            report.n.to_string(),
        ]);
    }
}

/// Advisory note when a measure is applied to estimates of a type it is not
/// unbiased for. The tool still computes what was asked.
fn mismatch_warning(tag: EstimateType, measure: BiasMeasure) -> Option<String> {
    let functional = measure.matched_functional();
    let proper = matches!(
        (tag, functional),
        (EstimateType::Mean, MatchedFunctional::Mean)
            | (EstimateType::Median, MatchedFunctional::Median)
    );
    if proper || tag == EstimateType::Unknown {
        return None;
    }
    if tag == EstimateType::Mode {
        return Some(
            "no practical bias measure matches mode-type estimates; use percentile \
             calibration (`estbias calibrate`) instead"
                .to_string(),
        );
    }
    if tag == EstimateType::Mean && measure == BiasMeasure::MeanReAct {
        return Some(
            "MeanReAct applied to mean-type estimates: the measure rewards under-estimates \
             of the mean; perfect mean estimates read as over-estimation, with expected \
             bias about -Var(actual)/mean^2"
                .to_string(),
        );
    }
    // harmonic point <= median <= mean for right-skewed effort usage
    let rank = |f: MatchedFunctional| match f {
        MatchedFunctional::HarmonicPoint => 1,
        MatchedFunctional::Median => 2,
        MatchedFunctional::Mean => 3,
    };
    let tag_rank = match tag {
        EstimateType::Mean => 3,
        EstimateType::Median => 2,
        _ => unreachable!("mode and unknown handled above"),
    };
    let reading = if rank(functional) < tag_rank {
        "over-estimation (negative bias)"
    } else {
        "under-estimation (positive bias)"
    };
    let rewards = match functional {
        MatchedFunctional::Mean => "mean",
        MatchedFunctional::Median => "median",
        MatchedFunctional::HarmonicPoint => "harmonic point (1/E[1/X])",
    };
    Some(format!(
        "{measure} applied to {tag}-type estimates is unbiased for the {rewards}; for \
         right-skewed effort usage, perfect {tag} estimates read as {reading}"
    ))
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

pub fn cmd_simulate(
    dist_spec: &str,
    estimate_raw: &str,
    measure_raw: &str,
    n: usize,
    seed: u64,
) -> CliResult<CommandOutput> {
    let dist = parse_dist(dist_spec)?;
    let measure: BiasMeasure = measure_raw.parse().map_err(CliError::from)?;
    let (label, estimate) = EstimateArg::parse(estimate_raw)?.resolve(&dist);

    // finite-support distributions are enumerated exactly instead of sampled
    let exact = dist.support_atoms().is_some();
    let (expected_bias, std_error, method) = if exact {
        let value = expected_bias_exact(&dist, estimate, measure).map_err(CliError::from)?;
        (value, None, "exact-enumeration")
    } else {
        let cfg = SimulationConfig::new(n, seed);
        let point =
            simulate_expected_bias(&dist, estimate, measure, &cfg).map_err(CliError::from)?;
        (point.expected_bias, point.std_error, "simulation")
    };

    let payload = json!({
        "distribution": dist_spec,
        "estimate": estimate,
        "estimate_label": label.map(|l| l.to_string()),
        "expected_bias": expected_bias,
        "measure": measure.name(),
        "method": method,
        "std_error": std_error,
    });
    let csv = CsvTable {
        header: vec![
            "measure",
            "estimate_label",
            "estimate",
            "expected_bias",
            "std_error",
            "method",
            "n_draws",
            "seed",
        ],
        rows: vec![vec![
            measure.name().to_string(),
            label.map(|l| l.to_string()).unwrap_or_default(),
            cell(estimate),
            cell(expected_bias),
            opt_cell(std_error),
            method.to_string(),
            n.to_string(),
            seed.to_string(),
        ]],
    };
    let envelope = ReportEnvelope::new(
        "simulate",
        json!({
            "dist": dist_spec,
            "estimate": estimate_raw,
            "measure": measure.name(),
            "n": n,
            "seed": seed,
        }),
        sha256_hex(dist_spec.as_bytes()),
        payload,
        Vec::new(),
    );
    Ok(CommandOutput { envelope, csv })
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

pub fn cmd_solve(dist_spec: &str, measure_raw: &str) -> CliResult<CommandOutput> {
    let dist = parse_dist(dist_spec)?;
    let measure: BiasMeasure = measure_raw.parse().map_err(CliError::from)?;
    let estimate = zero_bias_estimate(&dist, measure);
    let functional = measure.matched_functional();

    let payload = json!({
        "distribution": dist_spec,
        "functional": functional.to_string(),
        "measure": measure.name(),
        "method": "analytic",
        "zero_bias_estimate": estimate,
    });
    let csv = CsvTable {
        header: vec!["measure", "zero_bias_estimate", "functional", "method"],
        rows: vec![vec![
            measure.name().to_string(),
            cell(estimate),
            functional.to_string(),
            "analytic".to_string(),
        ]],
    };
    let envelope = ReportEnvelope::new(
        "solve",
        json!({ "dist": dist_spec, "measure": measure.name() }),
        sha256_hex(dist_spec.as_bytes()),
        payload,
        Vec::new(),
    );
    Ok(CommandOutput { envelope, csv })
}

// ---------------------------------------------------------------------------
// elicit
// ---------------------------------------------------------------------------

pub fn cmd_elicit(
    dist_spec: &str,
    measure_raw: &str,
    grid_raw: &str,
    n: usize,
    seed: u64,
) -> CliResult<CommandOutput> {
    let dist = parse_dist(dist_spec)?;
    let measure: BiasMeasure = measure_raw.parse().map_err(CliError::from)?;
    let grid = parse_grid(grid_raw)?;
    let cfg = SimulationConfig::new(n, seed);
    let result = elicitation_scan(&dist, measure, &grid, &cfg, DEFAULT_MATCH_TOLERANCE)
        .map_err(CliError::from)?;

    let payload = json!({
        "distribution": dist_spec,
        "grid": { "spec": grid_raw, "points": grid.len() },
        "matched_functional": result.matched_functional.map(|f| f.to_string()),
        "measure": measure.name(),
        "method": to_value(&result.method),
        "min_abs_bias": result.min_abs_bias,
        "optimal_estimate": result.optimal_estimate,
        "refined_root": result.refined_root,
    });
    let csv = CsvTable {
        header: vec![
            "measure",
            "optimal_estimate",
            "min_abs_bias",
            "refined_root",
            "matched_functional",
            "method",
            "n_draws",
            "seed",
        ],
        rows: vec![vec![
            measure.name().to_string(),
            cell(result.optimal_estimate),
            cell(result.min_abs_bias),
            opt_cell(result.refined_root),
            result
                .matched_functional
                .map(|f| f.to_string())
                .unwrap_or_default(),
            format!("{:?}", result.method),
            n.to_string(),
            seed.to_string(),
        ]],
    };
    let envelope = ReportEnvelope::new(
        "elicit",
        json!({
            "dist": dist_spec,
            "grid": grid_raw,
            "measure": measure.name(),
            "n": n,
            "seed": seed,
        }),
        sha256_hex(dist_spec.as_bytes()),
        payload,
        Vec::new(),
    );
    Ok(CommandOutput { envelope, csv })
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

pub fn cmd_calibrate(path: &Path, target: Option<f64>) -> CliResult<CommandOutput> {
    let dataset = load_dataset(path, false)?;
    let report = percentile_hit_rate(&dataset.records, target).map_err(CliError::from)?;

    let payload = to_value(&report);
    let csv = CsvTable {
        header: vec![
            "n",
            "hits",
            "hit_rate",
            "target_percentile",
            "deviation",
            "binomial_band",
        ],
        rows: vec![vec![
            report.n.to_string(),
            report.hits.to_string(),
            cell(report.hit_rate),
            opt_cell(report.target_percentile),
            opt_cell(report.deviation),
            opt_cell(report.binomial_band),
        ]],
    };
    let envelope = ReportEnvelope::new(
        "calibrate",
        json!({
            "input": path.display().to_string(),
            "target": target,
        }),
        dataset.digest,
        payload,
        dataset.warnings,
    );
    Ok(CommandOutput { envelope, csv })
}

// ---------------------------------------------------------------------------
// dice
// ---------------------------------------------------------------------------

pub fn cmd_dice() -> CliResult<CommandOutput> {
    let dice = DiceProduct::new();
    let cfg = SimulationConfig::default();

    let mut bias_table = Vec::new();
    let mut csv_rows = Vec::new();
    for label in [
        EstimateLabel::Mean,
        EstimateLabel::Median,
        EstimateLabel::Mode,
    ] {
        let estimate = label.resolve(&dice);
        let mut values = std::collections::BTreeMap::new();
        for measure in BiasMeasure::ALL {
            let bias = expected_bias_exact(&dice, estimate, measure).map_err(CliError::from)?;
            values.insert(measure, bias);
            csv_rows.push(vec![
                label.to_string(),
                cell(estimate),
                measure.name().to_string(),
                cell(bias),
            ]);
        }
        bias_table.push(json!({
            "estimate_label": label.to_string(),
            "estimate": estimate,
            "expected_bias": to_value(&values),
        }));
    }

    // the estimate at which relative error against actuals is unbiased:
    // exactly 14400/2401 in the continuum, 6 on the integer grid
    let continuous = zero_bias_estimate(&dice, BiasMeasure::MeanReAct);
    let grid: Vec<f64> = (1..=36).map(f64::from).collect();
    let integer_optimum = elicitation_scan(
        &dice,
        BiasMeasure::MeanReAct,
        &grid,
        &cfg,
        DEFAULT_MATCH_TOLERANCE,
    )
    .map_err(CliError::from)?
    .optimal_estimate;

    let payload = json!({
        "statistics": {
            "mean": dice.mean(),
            "median": dice.median(),
            "mode": dice.mode(),
            "variance": dice.variance(),
            "reciprocal_mean": dice.reciprocal_mean(),
            "harmonic_point": dice.harmonic_point(),
        },
        "atoms": to_value(&dice.enumerate()),
        "bias_table": bias_table,
        "re_act_optimal_estimate": continuous,
        "re_act_optimal_integer_estimate": integer_optimum,
    });
    let csv = CsvTable {
        header: vec!["estimate_label", "estimate", "measure", "expected_bias"],
        rows: csv_rows,
    };
    let envelope = ReportEnvelope::new("dice", json!({}), sha256_hex(b"dice"), payload, Vec::new());
    Ok(CommandOutput { envelope, csv })
}
