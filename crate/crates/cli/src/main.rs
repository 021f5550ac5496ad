//! `mintel`: run JSON-configured scenarios and write CSV/JSON reports.
//!
//! Exit status: 0 on success, 2 for config errors, 3 for domain errors,
//! 1 for I/O failures.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mintel_core::scenario::{run_scenario, Command, ScenarioConfig, ScenarioError};

#[derive(Debug, Parser)]
#[command(
    name = "mintel",
    version,
    about = "Evaluate and rank machine intelligence tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Score each configured test (or the induced oracle) against the universe
    Evaluate(RunArgs),
    /// Rank the configured tests by quality
    Tournament(RunArgs),
    /// Record a learning trajectory
    Learn(RunArgs),
    /// Step the truth/belief circle model
    Venn(RunArgs),
    /// Evaluate tests over a grid of observer inclusion probabilities
    Sweep(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Scenario config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Report path; overrides `output.path`
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's top-level seed
    #[arg(long)]
    seed: Option<u64>,
}

impl Sub {
    fn split(self) -> (Command, RunArgs) {
        match self {
            Sub::Evaluate(a) => (Command::Evaluate, a),
            Sub::Tournament(a) => (Command::Tournament, a),
            Sub::Learn(a) => (Command::Learn, a),
            Sub::Venn(a) => (Command::Venn, a),
            Sub::Sweep(a) => (Command::Sweep, a),
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (command, args) = cli.command.split();
    let mut config = ScenarioConfig::from_path(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = args.out {
        config.output.path = Some(out);
    }

    let report = run_scenario(command, &config)?.render(config.output_format());
    match &config.output.path {
        Some(path) => {
            fs::write(path, report).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => std::io::stdout()
            .write_all(report.as_bytes())
            .context("cannot write report to stdout")?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mintel: {e:#}");
            let code = e
                .downcast_ref::<ScenarioError>()
                .map_or(1, ScenarioError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
