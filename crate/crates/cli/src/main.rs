use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swapkit_cli::{run_oracle_suite, run_sweep, CliError, Experiment, GridArg, SweepConfig};

#[derive(Parser)]
#[command(name = "swapkit", version, about = "Entanglement swapping experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an experiment on a parameter grid and write CSV.
    Sweep {
        #[arg(long)]
        experiment: Experiment,
        /// `<param>=<start>:<stop>:<step>`; repeatable.
        #[arg(long = "grid")]
        grid: Vec<GridArg>,
        #[arg(long = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the analytic-versus-numeric cross-checks.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Sweep { experiment, grid, out, seed } => {
            let cfg = SweepConfig::new(experiment, &grid, out, seed)?;
            let output = run_sweep(&cfg)?;
            eprintln!("{}: wrote {} rows to {}", experiment, output.rows.len(), cfg.output_path.display());
            if output.violations.is_empty() {
                return Ok(ExitCode::SUCCESS);
            }
            for v in &output.violations {
                eprintln!("assertion failed: {v}");
            }
            Ok(ExitCode::from(1))
        }
        Command::Verify { trials, seed } => {
            let report = run_oracle_suite(seed, trials)?;
            print!("{}", report.to_csv());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
