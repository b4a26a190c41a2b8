//! `addlab`: seeded, reproducible front end for the channel, statistics and
//! bound computations in `addlab-core`.

mod commands;
mod envelope;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{bounds, channel, stats, CommandError, Outcome};
use envelope::ResultEnvelope;

#[derive(Debug, Parser)]
#[command(name = "addlab", version, about = "Random unitary channels and additivity bounds")]
struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, env = "ADDLAB_SEED", default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report wall_time_ms as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    omit_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form bound calculations.
    #[command(subcommand)]
    Bounds(bounds::BoundsCommand),
    /// Channel sampling and entropy estimates.
    #[command(subcommand)]
    Channel(channel::ChannelCommand),
    /// Random-state statistics.
    #[command(subcommand)]
    Stats(stats::StatsCommand),
}

const EXIT_ASSERTION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn run(cli: &Cli) -> Result<Outcome, CommandError> {
    match &cli.command {
        Command::Bounds(c) => bounds::run(c),
        Command::Channel(c) => channel::run(c, cli.seed),
        Command::Stats(c) => stats::run(c, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                CommandError::Usage(_) => EXIT_USAGE,
                CommandError::Resource(_) => EXIT_RESOURCE,
                CommandError::Assertion(_) => EXIT_ASSERTION,
            });
        }
    };
    let wall_time_ms = if cli.omit_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };

    let envelope = ResultEnvelope::new(&outcome, cli.seed, wall_time_ms);
    let text = match cli.format {
        Format::Json => envelope.to_json(),
        Format::Csv => envelope.to_csv(outcome.csv.as_deref()),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }

    if outcome.failed_checks.is_empty() {
        ExitCode::SUCCESS
    } else {
        for check in &outcome.failed_checks {
            eprintln!("assertion failed: {check}");
        }
        ExitCode::from(EXIT_ASSERTION)
    }
}
