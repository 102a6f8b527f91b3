//! Exit-code policy: 0 success, 1 computational failure, 2 usage or parse
//! error.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: unparsable files, specs, flags or values. Exit 2.
    Usage(anyhow::Error),
    /// The computation itself failed (e.g. a solver could not bracket). Exit 1.
    Failure(anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(anyhow::anyhow!(msg.into()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(e) | CliError::Failure(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<estbias::Error> for CliError {
    fn from(err: estbias::Error) -> Self {
        match err {
            estbias::Error::BracketFailed { .. } | estbias::Error::NoExactEnumeration => {
                CliError::Failure(err.into())
            }
            _ => CliError::Usage(err.into()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::usage("bad flag").exit_code(), 2);
        let solver_failure: CliError = estbias::Error::BracketFailed { lo: 1.0, hi: 64.0 }.into();
        assert_eq!(solver_failure.exit_code(), 1);
        assert!(matches!(solver_failure, CliError::Failure(_)));
        let parse_failure: CliError = estbias::Error::UnknownMeasure("mmre".into()).into();
        assert_eq!(parse_failure.exit_code(), 2);
    }
}
