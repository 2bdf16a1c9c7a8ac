use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fixpoint::{commands, config, Outcome};
use fixpoint_core::counterexample::DEFAULT_HORIZON;

#[derive(Parser)]
#[command(name = "fixpoint", version, about = "Fixed-point iteration laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the multi-step scheme and write a CSV trace.
    Iterate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the doubling counterexample in exact arithmetic.
    Counterexample {
        #[arg(long = "n", default_value_t = DEFAULT_HORIZON)]
        n: u64,
        /// Pair-gap threshold, e.g. `1e-3` or `1/1000` (parsed exactly).
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Run operator-class checks and write a JSON report.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every config in a directory.
    Sweep {
        #[arg(long)]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Outcome::ConfigError.code() as u8
            } else {
                0
            });
        }
    };
    let mut stdout = std::io::stdout().lock();
    let result = config::seed_from_env().and_then(|seed| match &cli.command {
        Command::Iterate { config, out } => commands::iterate(config, out.as_deref(), &mut stdout),
        Command::Counterexample { n, epsilon } => {
            commands::counterexample(*n, epsilon.as_deref(), &mut stdout)
        }
        Command::Classify { config, out } => {
            commands::classify(config, out.as_deref(), seed, &mut stdout)
        }
        Command::Sweep { dir } => commands::sweep(dir, seed, &mut stdout),
    });
    let outcome = result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.outcome()
    });
    ExitCode::from(outcome.code() as u8)
}
