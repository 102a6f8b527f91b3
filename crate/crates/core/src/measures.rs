//! Estimation records and the seven bias measures.
//!
//! A bias measure aggregates per-record scores either by arithmetic mean or
//! by sample median. The per-record score is one of four forms of the
//! deviation between actual and estimated effort. Positive bias always means
//! under-estimation (actual exceeded the estimate).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// What a recorded estimate was meant to represent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EstimateType {
    Mean,
    Median,
    Mode,
    #[default]
    Unknown,
}

impl fmt::Display for EstimateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EstimateType::Mean => "mean",
            EstimateType::Median => "median",
            EstimateType::Mode => "mode",
            EstimateType::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

impl FromStr for EstimateType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(EstimateType::Mean),
            "median" => Ok(EstimateType::Median),
            "mode" => Ok(EstimateType::Mode),
            "unknown" | "" => Ok(EstimateType::Unknown),
            other => Err(Error::UnknownEstimateType(other.to_string())),
        }
    }
}

/// One (estimated effort, actual effort) observation, in work-hours.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationRecord {
    /// Opaque label, echoed in error messages.
    pub id: String,
    /// Estimated effort in work-hours; strictly positive.
    pub estimated: f64,
    /// Actual effort in work-hours; strictly positive.
    pub actual: f64,
    /// What the estimate was meant to represent; `Unknown` when untagged.
    pub estimate_type: EstimateType,
}

impl EstimationRecord {
    /// Build an untagged record, validating positivity of both efforts.
    pub fn new(id: impl Into<String>, estimated: f64, actual: f64) -> Result<Self> {
        Self::with_type(id, estimated, actual, EstimateType::Unknown)
    }

    /// Build a tagged record, validating positivity of both efforts.
    pub fn with_type(
        id: impl Into<String>,
        estimated: f64,
        actual: f64,
        estimate_type: EstimateType,
    ) -> Result<Self> {
        let record = EstimationRecord {
            id: id.into(),
            estimated,
            actual,
            estimate_type,
        };
        record.validate()?;
        Ok(record)
    }

    /// Check the positivity invariant; division and logarithm safety depend on it.
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [("estimated", self.estimated), ("actual", self.actual)] {
            if !crate::is_positive_finite(value) {
                return Err(Error::InvalidEffort {
                    id: self.id.clone(),
                    field,
                    value,
                });
            }
        }
        Ok(())
    }
}

/// The per-record deviation form a measure is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PerRecordForm {
    /// `act - est`, in work-hours. Unbounded.
    Deviation,
    /// `(act - est) / act`. Scores lie in (-inf, 1).
    RelToActual,
    /// `(act - est) / est`. Scores lie in (-1, inf).
    RelToEstimate,
    /// `ln(act) - ln(est)`. Unbounded, symmetric.
    LogRatio,
}

impl PerRecordForm {
    /// Score one (estimate, actual) pair. Callers must have validated positivity.
    pub fn score(self, estimated: f64, actual: f64) -> f64 {
        match self {
            PerRecordForm::Deviation => actual - estimated,
            PerRecordForm::RelToActual => (actual - estimated) / actual,
            PerRecordForm::RelToEstimate => (actual - estimated) / estimated,
            // Computed as a difference of logs so that swapping the two
            // arguments negates the score bitwise.
            PerRecordForm::LogRatio => actual.ln() - estimated.ln(),
        }
    }
}

/// How per-record scores are aggregated into a dataset-level bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Aggregation {
    Mean,
    Median,
}

/// The statistical functional a measure gives zero expected bias for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MatchedFunctional {
    Mean,
    Median,
    /// `1 / E[1/X]`; the estimate at which mean relative error against
    /// actuals has zero expectation.
    HarmonicPoint,
}

impl fmt::Display for MatchedFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatchedFunctional::Mean => "Mean",
            MatchedFunctional::Median => "Median",
            MatchedFunctional::HarmonicPoint => "HarmonicPoint",
        };
        f.write_str(s)
    }
}

/// One of the seven bias measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BiasMeasure {
    /// Mean of `act - est`, in work-hours.
    MeanDev,
    /// Mean of `(act - est) / act`; the widely used effort-overrun measure.
    MeanReAct,
    /// Mean of `(act - est) / est`.
    MeanReEst,
    /// Median of `act - est`, in work-hours.
    MedianDev,
    /// Median of `(act - est) / act`.
    MedianReAct,
    /// Median of `(act - est) / est`.
    MedianReEst,
    /// Median of `ln(act / est)`; symmetric and scale-free.
    MdLogErr,
}

impl BiasMeasure {
    /// All seven measures, in canonical order.
    pub const ALL: [BiasMeasure; 7] = [
        BiasMeasure::MeanDev,
        BiasMeasure::MeanReAct,
        BiasMeasure::MeanReEst,
        BiasMeasure::MedianDev,
        BiasMeasure::MedianReAct,
        BiasMeasure::MedianReEst,
        BiasMeasure::MdLogErr,
    ];

    /// Canonical wire name, used in reports and the CLI.
    pub fn name(self) -> &'static str {
        match self {
            BiasMeasure::MeanDev => "MeanDev",
            BiasMeasure::MeanReAct => "MeanReAct",
            BiasMeasure::MeanReEst => "MeanReEst",
            BiasMeasure::MedianDev => "MedianDev",
            BiasMeasure::MedianReAct => "MedianReAct",
            BiasMeasure::MedianReEst => "MedianReEst",
            BiasMeasure::MdLogErr => "MdLogErr",
        }
    }

    pub fn aggregation(self) -> Aggregation {
        match self {
            BiasMeasure::MeanDev | BiasMeasure::MeanReAct | BiasMeasure::MeanReEst => {
                Aggregation::Mean
            }
            _ => Aggregation::Median,
        }
    }

    pub fn per_record_form(self) -> PerRecordForm {
        match self {
            BiasMeasure::MeanDev | BiasMeasure::MedianDev => PerRecordForm::Deviation,
            BiasMeasure::MeanReAct | BiasMeasure::MedianReAct => PerRecordForm::RelToActual,
            BiasMeasure::MeanReEst | BiasMeasure::MedianReEst => PerRecordForm::RelToEstimate,
            BiasMeasure::MdLogErr => PerRecordForm::LogRatio,
        }
    }

    /// The functional this measure is unbiased for (the static match table).
    pub fn matched_functional(self) -> MatchedFunctional {
        match self {
            BiasMeasure::MeanDev | BiasMeasure::MeanReEst => MatchedFunctional::Mean,
            BiasMeasure::MeanReAct => MatchedFunctional::HarmonicPoint,
            BiasMeasure::MedianDev
            | BiasMeasure::MedianReAct
            | BiasMeasure::MedianReEst
            | BiasMeasure::MdLogErr => MatchedFunctional::Median,
        }
    }
}

impl fmt::Display for BiasMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for BiasMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl FromStr for BiasMeasure {
    type Err = Error;

    /// Parse a measure name; case-insensitive, underscores ignored.
    fn from_str(s: &str) -> Result<Self> {
        let folded: String = s
            .chars()
            .filter(|c| *c != '_')
            .map(|c| c.to_ascii_lowercase())
            .collect();
        BiasMeasure::ALL
            .iter()
            .copied()
            .find(|m| m.name().to_ascii_lowercase() == folded)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

/// Score one record under one per-record form.
pub fn per_record_score(record: &EstimationRecord, form: PerRecordForm) -> Result<f64> {
    record.validate()?;
    Ok(form.score(record.estimated, record.actual))
}

/// Sample median; even length takes the midpoint of the two central order
/// statistics. `scores` must be non-empty and free of NaN.
pub(crate) fn median_of(scores: &mut [f64]) -> f64 {
    debug_assert!(!scores.is_empty());
    scores.sort_by(|a, b| a.partial_cmp(b).expect("scores must not contain NaN"));
    let n = scores.len();
    if n % 2 == 1 {
        scores[n / 2]
    } else {
        (scores[n / 2 - 1] + scores[n / 2]) / 2.0
    }
}

/// Aggregate pre-computed per-record scores.
pub(crate) fn aggregate_scores(scores: &mut [f64], aggregation: Aggregation) -> f64 {
    debug_assert!(!scores.is_empty());
    match aggregation {
        Aggregation::Mean => scores.iter().sum::<f64>() / scores.len() as f64,
        Aggregation::Median => median_of(scores),
    }
}

/// Evaluate one bias measure over a dataset.
///
/// Any invalid record aborts the computation; there is no silent skipping.
pub fn compute_bias(records: &[EstimationRecord], measure: BiasMeasure) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let form = measure.per_record_form();
    let mut scores = records
        .iter()
        .map(|r| per_record_score(r, form))
        .collect::<Result<Vec<f64>>>()?;
    Ok(aggregate_scores(&mut scores, measure.aggregation()))
}

/// A measure-by-measure bias report over one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasReport {
    /// Number of records evaluated.
    pub n: usize,
    /// Measure name -> bias value.
    pub values: BTreeMap<BiasMeasure, f64>,
    /// Measure name -> the functional it is unbiased for.
    pub match_notes: BTreeMap<BiasMeasure, MatchedFunctional>,
}

/// Evaluate a set of measures over a dataset. Duplicate measures are folded.
pub fn bias_suite(records: &[EstimationRecord], measures: &[BiasMeasure]) -> Result<BiasReport> {
    if measures.is_empty() {
        return Err(Error::NoMeasures);
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut values = BTreeMap::new();
    let mut match_notes = BTreeMap::new();
    for &measure in measures {
        values.insert(measure, compute_bias(records, measure)?);
        match_notes.insert(measure, measure.matched_functional());
    }
    Ok(BiasReport {
        n: records.len(),
        values,
        match_notes,
    })
}
