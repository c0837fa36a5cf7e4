use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cone_count::arith::DEFAULT_TABLE_BUDGET;
use cone_count::Calibration;
use cone_count_cli::{emit, parse_grid, run_suite, CliError, Format, Grid, RunConfig, Suite};

/// Exact counts and numerical checks for orthogonal integer vector pairs.
#[derive(Debug, Parser)]
#[command(name = "cone-count", version)]
struct Args {
    /// Suite to run.
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Report format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every sampled input.
    #[arg(long, default_value_t = 20_241_016)]
    seed: u64,
    /// Largest X*Y a box count may tabulate; larger checks are skipped.
    #[arg(long, default_value_t = DEFAULT_TABLE_BUDGET)]
    budget: u64,
    /// Comma-separated inputs: `X:Y` items for boxes, bare integers for height bounds.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<Grid>,
    /// JSON file overriding the empirical constants.
    #[arg(long)]
    calibration: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn run(args: Args) -> Result<u8, CliError> {
    let calibration = match &args.calibration {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Calibration::from_json_str(&text).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None => Calibration::default(),
    };
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let config = RunConfig {
        seed: args.seed,
        budget: args.budget,
        grid: args.grid.unwrap_or_default(),
        calibration,
        jobs: args.jobs,
    };
    let report = run_suite(args.suite, &config)?;
    emit(&report, args.format, args.out.as_deref())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cone-count: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
