//! `tomolab run --config <file> --out <csv> [--workers N] [--seed S]`
//! `tomolab validate --config <file>`
//!
//! Exit codes: 0 success, 1 other failure, 2 config error, 3 solver
//! non-convergence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tomolab::experiment::{emit_results, parse_config, run_experiment, ExperimentConfig};
use tomolab::Error;

#[derive(Parser)]
#[command(name = "tomolab", version, about = "Kicked-top weak-measurement tomography experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its result table as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a config file and print it with defaults filled in.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { config } => load(&config).map(|cfg| print!("{}", cfg.to_toml())),
        Command::Run {
            config,
            out,
            workers,
            seed,
        } => load(&config).and_then(|mut cfg| {
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let workers = workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if workers == 0 {
                return Err(Error::Config("--workers must be at least 1".into()));
            }
            let table = run_experiment(&cfg, workers)?;
            emit_results(&table, &out)?;
            eprintln!("wrote {} rows to {}", table.rows.len(), out.display());
            Ok(())
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("tomolab: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
