mod commands;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::Format;

/// Exact genus-g partition functions, correlators, theta series and Casimir data.
#[derive(Parser, Debug)]
#[command(name = "sewing", version, about)]
pub struct Cli {
    /// Worker threads; output never depends on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long = "out", value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Work budget (Wick evaluations per coefficient, or Casimir applications for `pv`).
    #[arg(long, env = "SEWING_BUDGET", global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Partition function as a truncated series in the sewing parameters.
    Partition(commands::PartitionArgs),
    /// Exact sphere correlator of a list of insertions.
    Correlate(commands::CorrelateArgs),
    /// Theta series of a lattice.
    Theta(commands::ThetaArgs),
    /// Graded dimensions of the Casimir-generated subalgebra.
    Pv(commands::PvArgs),
    /// Schottky coordinate utilities.
    Schottky {
        #[command(subcommand)]
        action: commands::SchottkyAction,
    },
    /// First coefficient where two partition functions differ.
    Compare(commands::CompareArgs),
    /// Independent genus-1 closed forms.
    Oracle(commands::OracleArgs),
}

/// An error with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub const USAGE: u8 = 2;
    pub const BUDGET: u8 = 3;
    pub const DOMAIN: u8 = 4;
    pub const INTERNAL: u8 = 5;

    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: Self::USAGE, message: message.into() }
    }

    pub fn internal(e: impl fmt::Display) -> Self {
        CliError { code: Self::INTERNAL, message: e.to_string() }
    }
}

impl From<sewing_core::Error> for CliError {
    fn from(e: sewing_core::Error) -> Self {
        use sewing_core::Error;
        let code = match &e {
            Error::Budget(_) => Self::BUDGET,
            Error::Invariant(_) => Self::INTERNAL,
            e if e.is_math_domain() => Self::DOMAIN,
            _ => Self::USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if cli.budget == Some(0) {
        return Err(CliError::usage("budget must be positive"));
    }
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(CliError::internal)?;
    let doc = pool.install(|| commands::dispatch(&cli.command, cli.budget))?;
    let text = doc.render(cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
