//! Parsing of distribution spec strings.
//!
//! Grammar:
//!   `lognormal:mean=<m>,sd=<s>`
//!   `lognormal:mean=<m>,median=<md>`
//!   `dice`
//!   `empirical:<path.csv>`  (single column of positive reals)

use std::fs;

use crate::distributions::{DiceProduct, EffortDist, Empirical, LogNormalEffort};
use crate::error::{Error, Result};

fn bad(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidDistSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

/// Parse a distribution spec string. `empirical:` specs read their sample
/// file immediately.
pub fn parse_dist_spec(spec: &str) -> Result<EffortDist> {
    let trimmed = spec.trim();
    if trimmed == "dice" {
        return Ok(EffortDist::Dice(DiceProduct::new()));
    }
    if let Some(args) = trimmed.strip_prefix("lognormal:") {
        return parse_lognormal(spec, args);
    }
    if let Some(path) = trimmed.strip_prefix("empirical:") {
        return load_empirical(spec, path.trim());
    }
    Err(bad(
        spec,
        "expected `lognormal:mean=..,sd=..`, `lognormal:mean=..,median=..`, `dice` or `empirical:<path.csv>`",
    ))
}

fn parse_lognormal(spec: &str, args: &str) -> Result<EffortDist> {
    let mut mean = None;
    let mut sd = None;
    let mut median = None;
    for pair in args.split(',') {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| bad(spec, format!("expected key=value, got `{pair}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| bad(spec, format!("`{}` is not a number", value.trim())))?;
        let slot = match key.trim() {
            "mean" => &mut mean,
            "sd" => &mut sd,
            "median" => &mut median,
            other => return Err(bad(spec, format!("unknown parameter `{other}`"))),
        };
        if slot.replace(value).is_some() {
            return Err(bad(spec, format!("duplicate parameter `{}`", key.trim())));
        }
    }
    let mean = mean.ok_or_else(|| bad(spec, "lognormal needs `mean=`"))?;
    let dist = match (sd, median) {
        (Some(sd), None) => LogNormalEffort::from_mean_sd(mean, sd),
        (None, Some(median)) => LogNormalEffort::from_mean_median(mean, median),
        (Some(_), Some(_)) => return Err(bad(spec, "give either `sd=` or `median=`, not both")),
        (None, None) => return Err(bad(spec, "lognormal needs `sd=` or `median=`")),
    }?;
    Ok(EffortDist::LogNormal(dist))
}

fn load_empirical(spec: &str, path: &str) -> Result<EffortDist> {
    if path.is_empty() {
        return Err(bad(spec, "empirical needs a file path"));
    }
    let text = fs::read_to_string(path).map_err(|source| Error::EmpiricalFile {
        path: path.to_string(),
        source,
    })?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::EmpiricalValue {
            path: path.to_string(),
            line: i + 1,
            value: line.to_string(),
        })?;
        if !crate::is_positive_finite(value) {
            return Err(Error::EmpiricalValue {
                path: path.to_string(),
                line: i + 1,
                value: line.to_string(),
            });
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(bad(spec, format!("`{path}` holds no samples")));
    }
    Ok(EffortDist::Empirical(Empirical::new(samples)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::EffortDistribution;

    #[test]
    fn parses_the_canonical_forms() {
        let d = parse_dist_spec("lognormal:mean=236,sd=126").unwrap();
        assert!((d.mean() - 236.0).abs() < 1e-9);
        let d = parse_dist_spec("lognormal:mean=236,median=209").unwrap();
        assert!((d.median() - 209.0).abs() < 1e-9);
        let d = parse_dist_spec("dice").unwrap();
        assert_eq!(d.mean(), 12.25);
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad_spec in [
            "",
            "triangular:a=1,b=2",
            "lognormal:mean=236",
            "lognormal:sd=126",
            "lognormal:mean=236,sd=126,median=209",
            "lognormal:mean=236,sd=abc",
            "lognormal:mean=236,shape=1",
            "lognormal:mean=nope",
            "lognormal:mean=236,mean=240,sd=1",
            "empirical:",
            "empirical:/no/such/file.csv",
        ] {
            assert!(parse_dist_spec(bad_spec).is_err(), "accepted `{bad_spec}`");
        }
    }

    #[test]
    fn loads_a_single_column_sample_file() {
        let dir = std::env::temp_dir().join("estbias-spec-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("efforts.csv");
        std::fs::write(&path, "120\n90.5\n\n240\n").unwrap();
        let d = parse_dist_spec(&format!("empirical:{}", path.display())).unwrap();
        match &d {
            EffortDist::Empirical(e) => assert_eq!(e.len(), 3),
            other => panic!("expected empirical, got {other:?}"),
        }
        std::fs::write(&path, "120\n-4\n").unwrap();
        let err = parse_dist_spec(&format!("empirical:{}", path.display())).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
