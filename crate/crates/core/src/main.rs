use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dipole_lab::cli::{execute, ExperimentKind, Overrides, EXIT_ERROR};

/// Geometric phases and factorization diagnostics for a neutral Dirac
/// particle with an induced electric dipole moment.
#[derive(Debug, Parser)]
#[command(name = "dipole-lab", version)]
struct Args {
    /// Experiment to run; overrides the `experiment` key of the config.
    experiment: Option<ExperimentKind>,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized verification.
    #[arg(long)]
    seed: Option<u64>,
    /// Replaces the deviation gates of the selected experiment.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        experiment: args.experiment,
        seed: args.seed,
        tolerance: args.tolerance,
        out: args.out,
    };
    match execute(&args.config, &overrides) {
        Ok((output, dir)) => {
            let status = if output.record.passed { "passed" } else { "FAILED" };
            println!("{}: {status}; results in {}", output.record.config.experiment, dir.display());
            ExitCode::from(output.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
