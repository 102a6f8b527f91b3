//! `estbias` — bias evaluation for software effort estimates.

mod commands;
mod dataset;
mod envelope;
mod errors;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::CommandOutput;
use crate::errors::CliResult;

#[derive(Parser)]
#[command(
    name = "estbias",
    version,
    about = "Bias measures for software effort estimates: evaluate datasets, \
             simulate expected bias, and solve for the estimate each measure rewards"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bias measures over a CSV dataset (`id,estimated,actual[,estimate_type]`)
    Evaluate {
        /// Dataset file
        path: PathBuf,
        /// Comma-separated measure names, or `all`
        #[arg(long, value_delimiter = ',', default_value = "all")]
        measures: Vec<String>,
        /// Count and skip rows that fail to parse or violate positivity
        #[arg(long)]
        skip_invalid: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Expected bias of a fixed estimate against an effort distribution
    Simulate {
        /// Distribution spec: `lognormal:mean=..,sd=..`, `lognormal:mean=..,median=..`,
        /// `dice`, or `empirical:<path.csv>`
        #[arg(long)]
        dist: String,
        /// Work-hours value, or one of `mode`, `median`, `mean`, `harmonic`
        #[arg(long)]
        estimate: String,
        /// Bias measure name
        #[arg(long)]
        measure: String,
        /// Number of simulated project executions
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, env = "ESTBIAS_SEED", default_value_t = estbias::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// The estimate with zero expected bias under a measure (closed form)
    Solve {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        measure: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Scan an estimate grid for the value a measure rewards
    Elicit {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        measure: String,
        /// Estimate grid as `lo..hi[:step]`; the step defaults to 1
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, env = "ESTBIAS_SEED", default_value_t = estbias::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Percentile hit rate of a dataset, optionally against a target
    Calibrate {
        /// Dataset file
        path: PathBuf,
        /// Target percentile in (0, 1), e.g. 0.45
        #[arg(long)]
        target: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// The two-dice worked example: exact statistics and the bias of each
    /// measure under mean, median and mode estimates
    Dice {
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

fn run(cli: Cli) -> CliResult<(CommandOutput, OutputFormat)> {
    match cli.command {
        Command::Evaluate {
            path,
            measures,
            skip_invalid,
            format,
        } => Ok((
            commands::cmd_evaluate(&path, &measures, skip_invalid)?,
            format,
        )),
        Command::Simulate {
            dist,
            estimate,
            measure,
            n,
            seed,
            format,
        } => Ok((
            commands::cmd_simulate(&dist, &estimate, &measure, n, seed)?,
            format,
        )),
        Command::Solve {
            dist,
            measure,
            format,
        } => Ok((commands::cmd_solve(&dist, &measure)?, format)),
        Command::Elicit {
            dist,
            measure,
            grid,
            n,
            seed,
            format,
        } => Ok((
            commands::cmd_elicit(&dist, &measure, &grid, n, seed)?,
            format,
        )),
        Command::Calibrate {
            path,
            target,
            format,
        } => Ok((commands::cmd_calibrate(&path, target)?, format)),
        Command::Dice { format } => Ok((commands::cmd_dice()?, format)),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok((output, format)) => {
            for warning in &output.envelope.warnings {
                eprintln!("warning: {warning}");
            }
            match format {
                OutputFormat::Json => print!("{}", output.envelope.to_json()),
                OutputFormat::Csv => print!("{}", output.csv.render()),
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
