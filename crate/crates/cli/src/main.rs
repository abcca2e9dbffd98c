//! `zerorep`: simulation, theory and data-analysis front end.

mod artifacts;
mod commands;
mod config;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "zerorep",
    version,
    about = "Orthogonal random-matrix models and elliptic-curve zero statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an ensemble and summarize the first normalized angle above zero.
    Simulate(commands::simulate::SimulateArgs),
    /// Limiting densities, gap probabilities, means and Fourier transforms.
    Theory(commands::theory::TheoryArgs),
    /// Summary tables from an elliptic-curve zero dataset.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Two-sample t, sign and normal-tail tests.
    Ttest(commands::ttest::TtestArgs),
    /// Prime side (and optionally zero side) of the explicit formula.
    Explicit(commands::explicit::ExplicitArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Theory(a) => commands::theory::run(a),
        Command::Analyze(a) => commands::analyze::run(a),
        Command::Ttest(a) => commands::ttest::run(a),
        Command::Explicit(a) => commands::explicit::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
