//! `nhspec`: run analytic and numerical spectra, eigenstates, winding
//! numbers, edge modes and parameter sweeps from a JSON configuration.

mod config;
mod error;
mod output;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nhspec_core::numeric::DEFAULT_MAX_DIM;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::RunOutput;
use crate::tasks::Run;

#[derive(Parser)]
#[command(name = "nhspec", version, about = "Spectra and eigenstates of a non-Hermitian chain and its continuum limit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic and numeric energies
    Spectrum(RunArgs),
    /// Eigenstates listed in `states.indices`, with localization diagnostics
    States(RunArgs),
    /// Winding numbers of the PBC curve around base energies
    Winding(RunArgs),
    /// Semi-infinite edge state for one interior base energy
    Edge(RunArgs),
    /// Summary scalars over a cartesian parameter grid
    Sweep(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::States(_) => "states",
            Command::Winding(_) => "winding",
            Command::Edge(_) => "edge",
            Command::Sweep(_) => "sweep",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Spectrum(a) | Command::States(a) | Command::Winding(a) | Command::Edge(a) | Command::Sweep(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output.directory`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid points for continuum states (overrides `output.points`)
    #[arg(long)]
    points: Option<usize>,
    /// Seed for the sweep evaluation order
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn max_n() -> CliResult<usize> {
    match std::env::var("NHSPEC_MAX_N") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Validation(format!("NHSPEC_MAX_N must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn execute(command: &Command) -> CliResult<PathBuf> {
    let args = command.args();
    let config = RunConfig::load(&args.config)?;
    let points = args.points.unwrap_or(config.output.points);
    if points < 5 {
        return Err(CliError::Validation(format!("--points must be at least 5, got {points}")));
    }
    let run = Run {
        config: &config,
        points,
        seed: args.seed,
        max_n: max_n()?,
    };
    let dir = args.out.clone().unwrap_or_else(|| config.output.directory.clone());
    let mut out = RunOutput::create(&dir, config.output.format)?;
    match command {
        Command::Spectrum(_) => tasks::run_spectrum(&run, &mut out)?,
        Command::States(_) => tasks::run_states(&run, &mut out)?,
        Command::Winding(_) => tasks::run_winding(&run, &mut out)?,
        Command::Edge(_) => tasks::run_edge(&run, &mut out)?,
        Command::Sweep(_) => tasks::run_sweep(&run, &mut out)?,
    }
    let echo = serde_json::to_value(&config).expect("config serializes");
    out.finish(command.name(), echo, args.seed, points)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(manifest) => {
            println!("{}", manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("nhspec {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
