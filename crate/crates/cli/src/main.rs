//! `r3k`: build, verify and measure triangle-free graphs from the overlay
//! construction and its baselines.
//!
//! Exit status: 0 when every hard invariant holds, 1 when one is violated,
//! 2 on usage or I/O errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod sweep;

use commands::{DiagnoseArgs, Status, VerifyArgs};
use config::ParamArgs;

#[derive(Parser)]
#[command(name = "r3k", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build overlay instances (or hypergraph instances with --hyper)
    Build {
        #[command(flatten)]
        params: ParamArgs,
        /// Build the 3-uniform analogue instead
        #[arg(long)]
        hyper: bool,
    },
    /// Check a saved graph or triple system
    Verify(VerifyArgs),
    /// Independence number of a saved graph, with a certificate
    Alpha(VerifyArgs),
    /// Degree/codegree concentration and k-set classification
    Diagnose(DiagnoseArgs),
    /// Build and check hypergraph instances
    Hyper(ParamArgs),
    /// Run constructions over a grid of orders and seeds, writing CSV
    Sweep(sweep::SweepArgs),
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Build { params, hyper } => commands::cmd_build(&params, hyper),
        Command::Verify(a) => commands::cmd_verify(&a),
        Command::Alpha(a) => commands::cmd_alpha(&a),
        Command::Diagnose(a) => commands::cmd_diagnose(&a),
        Command::Hyper(a) => commands::cmd_hyper(&a),
        Command::Sweep(a) => sweep::cmd_sweep(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(status) if status.violations.is_empty() => ExitCode::SUCCESS,
        Ok(status) => {
            for v in &status.violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
