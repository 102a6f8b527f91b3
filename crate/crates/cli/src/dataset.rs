//! Ingestion of `id,estimated,actual[,estimate_type]` CSV datasets.

use std::path::Path;

use estbias::{EstimateType, EstimationRecord};

use crate::envelope::sha256_hex;
use crate::errors::{CliError, CliResult};

#[derive(Debug)]
pub struct LoadedDataset {
    pub records: Vec<EstimationRecord>,
    pub skipped_rows: usize,
    pub digest: String,
    pub warnings: Vec<String>,
    pub has_type_tags: bool,
}

/// Load and validate a dataset file.
///
/// The header is required. The delimiter is a comma; a semicolon-delimited
/// file is auto-detected and accepted with a warning. With `skip_invalid`,
/// rows that fail to parse or violate positivity are counted and dropped;
/// otherwise the first bad row aborts with its line number.
pub fn load_dataset(path: &Path, skip_invalid: bool) -> CliResult<LoadedDataset> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::usage(format!("cannot read `{}`: {e}", path.display())))?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::usage(format!("`{}` is not UTF-8", path.display())))?;

    let mut warnings = Vec::new();
    let first_line = text.lines().next().unwrap_or("");
    let delimiter = if first_line.contains(';') && !first_line.contains(',') {
        warnings.push("semicolon delimiter detected; expected comma".to_string());
        b';'
    } else {
        b','
    };

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::usage(format!("cannot read header: {e}")))?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let with_type = match headers.as_slice() {
        [id, est, act] if id == "id" && est == "estimated" && act == "actual" => false,
        [id, est, act, ty]
            if id == "id" && est == "estimated" && act == "actual" && ty == "estimate_type" =>
        {
            true
        }
        other => {
            return Err(CliError::usage(format!(
                "expected header `id,estimated,actual[,estimate_type]`, got `{}`",
                other.join(",")
            )));
        }
    };

    let mut records = Vec::new();
    let mut skipped_rows = 0usize;
    for result in reader.records() {
        let line = result
            .as_ref()
            .ok()
            .and_then(|r| r.position().map(|p| p.line()))
            .unwrap_or(0);
        match parse_row(result, with_type) {
            Ok(record) => records.push(record),
            Err(_) if skip_invalid => {
                skipped_rows += 1;
            }
            Err(reason) => {
                return Err(CliError::usage(format!(
                    "`{}` line {line}: {reason}",
                    path.display()
                )));
            }
        }
    }

    if records.is_empty() {
        return Err(CliError::usage(format!(
            "`{}` holds no valid records{}",
            path.display(),
            if skipped_rows > 0 {
                format!(" ({skipped_rows} invalid rows skipped)")
            } else {
                String::new()
            }
        )));
    }
    if skipped_rows > 0 {
        warnings.push(format!("skipped {skipped_rows} invalid row(s)"));
    }

    let has_type_tags = records
        .iter()
        .any(|r| r.estimate_type != EstimateType::Unknown);

    Ok(LoadedDataset {
        records,
        skipped_rows,
        digest,
        warnings,
        has_type_tags,
    })
}

fn parse_row(
    result: Result<csv::StringRecord, csv::Error>,
    with_type: bool,
) -> Result<EstimationRecord, String> {
    let row = result.map_err(|e| format!("malformed row: {e}"))?;
    let expected = if with_type { 4 } else { 3 };
    if row.len() != expected {
        return Err(format!("expected {expected} fields, got {}", row.len()));
    }
    let id = row.get(0).unwrap_or_default().to_string();
    let estimated: f64 = row
        .get(1)
        .unwrap_or_default()
        .parse()
        .map_err(|_| format!("`{}` is not a number", row.get(1).unwrap_or_default()))?;
    let actual: f64 = row
        .get(2)
        .unwrap_or_default()
        .parse()
        .map_err(|_| format!("`{}` is not a number", row.get(2).unwrap_or_default()))?;
    let estimate_type = if with_type {
        row.get(3)
            .unwrap_or_default()
            .parse::<EstimateType>()
            .map_err(|e| e.to_string())?
    } else {
        EstimateType::Unknown
    };
    EstimationRecord::with_type(id, estimated, actual, estimate_type).map_err(|e| e.to_string())
}
