//! `mixperc`: singlet conversion calculators, oracle verification and
//! percolation runs for mixed-state entanglement networks.

mod commands;
mod config;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use commands::{Failure, Outcome};
use config::{Format, Settings};

#[derive(Parser)]
#[command(name = "mixperc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML file with default settings; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evaluate a closed-form singlet conversion probability over a grid
    Scp,
    /// Compare closed forms against exact branch enumeration
    Verify,
    /// Crossing and cluster statistics at fixed bond probability
    Percolate,
    /// Estimate percolation thresholds by bisection
    Threshold,
    /// Run a bond strategy on a lattice and report connection probabilities
    Network,
    /// Two-path feasibility of a network description file
    Feasibility,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Scp => "scp",
            Command::Verify => "verify",
            Command::Percolate => "percolate",
            Command::Threshold => "threshold",
            Command::Network => "network",
            Command::Feasibility => "feasibility",
        }
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<Settings> {
    let file = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    Ok(file.overlay(cli.settings.clone()))
}

fn emit(outcome: &Outcome, s: &Settings) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    match s.format.unwrap_or(Format::Csv) {
        Format::Csv => outcome.table.write_csv(&mut buf)?,
        Format::Json => outcome.table.write_json(&mut buf)?,
    }
    match &s.out {
        Some(path) => fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let s = resolve(cli)?;
    eprintln!("# {} resolved config", cli.command.name());
    eprint!("{}", s.to_toml());
    if let Some(workers) = s.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build_global()
            .context("starting worker pool")?;
    }
    let outcome = match cli.command {
        Command::Scp => commands::cmd_scp(&s),
        Command::Verify => commands::cmd_verify(&s),
        Command::Percolate => commands::cmd_percolate(&s),
        Command::Threshold => commands::cmd_threshold(&s),
        Command::Network => commands::cmd_network(&s),
        Command::Feasibility => commands::cmd_feasibility(&s),
    }?;
    emit(&outcome, &s)?;
    if !outcome.passed {
        return Err(Failure::Verification("see per-case report above".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("mixperc: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
