//! `hsconvex`: class-membership checks, inequality verification, sweeps and
//! special means from the command line.
//!
//! Exit status: 0 when every requested check holds, 1 when any fails, 2 on
//! usage or domain errors.

mod commands;
mod render;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Reports;
use settings::Settings;

#[derive(Parser)]
#[command(
    name = "hsconvex",
    version,
    about = "Numerical checks for generalized convexity and Hadamard-type inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a violation of a convexity class
    ClassCheck(Settings),
    /// Find the s values for which f belongs to an s-parametrized class
    SRange(Settings),
    /// Evaluate one inequality
    Verify(Settings),
    /// Evaluate inequalities over a grid of s values and intervals
    Sweep(Settings),
    /// Special means of a and b, optionally with their ordering chain
    Means(Settings),
    /// Check the logarithmic-identric propositions
    Props(Settings),
}

type Handler = fn(&Settings) -> anyhow::Result<Reports>;

fn run(command: Command) -> anyhow::Result<bool> {
    let (name, flags, handler): (&str, Settings, Handler) = match command {
        Command::ClassCheck(s) => ("class-check", s, commands::class_check),
        Command::SRange(s) => ("s-range", s, commands::s_range),
        Command::Verify(s) => ("verify", s, commands::verify),
        Command::Sweep(s) => ("sweep", s, commands::sweep_grid),
        Command::Means(s) => ("means", s, commands::means),
        Command::Props(s) => ("props", s, commands::props),
    };
    let settings = flags.resolve(name)?;
    let reports = handler(&settings)?;
    let rendered = render::render(&settings, &reports)?;
    match &settings.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(reports.all_hold())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
