//! `ellsurf`: generate curves, K-surface meshes and kaleidocycle animations,
//! and run the verification suites.
//!
//! Exit status: 0 on success, 1 when a validation check fails, 2 on a
//! configuration or I/O error.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ellsurf", version, about = "Elliptic semi-discrete surfaces and discrete K-surfaces")]
struct Cli {
    /// Flat `key = value` file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write snapshots Γ_m(t), B_m(t) of a semi-discrete surface.
    Curve(commands::CurveArgs),
    /// Write a discrete K-surface mesh and its residual sidecar.
    Ksurface(commands::KSurfaceArgs),
    /// Write one CSV per time slice of a closed linkage.
    Kaleidocycle(commands::KaleidocycleArgs),
    /// Run every invariant suite and write a JSON report.
    Verify(commands::VerifyArgs),
    /// Run the theta, Weierstrass and Jacobi identity corpus.
    Identities(commands::VerifyArgs),
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Curve(a) => commands::curve(a, &cfg),
        Command::Ksurface(a) => commands::ksurface(a, &cfg),
        Command::Kaleidocycle(a) => commands::kaleidocycle(a, &cfg),
        Command::Verify(a) => commands::verify(a, &cfg),
        Command::Identities(a) => commands::identities(a, &cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
