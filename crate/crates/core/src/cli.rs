//! Experiment runner behind the `molqi` binary.
//!
//! ```text
//! molqi run <config> [--out DIR]
//! molqi sweep <config> [--workers N] [--out DIR]
//! molqi list-experiments
//! ```
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O
//! error.

pub mod config;
pub mod experiments;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Axis, ExperimentConfig, OutputSpec};
pub use experiments::{run_experiment, ExperimentId};
pub use output::CurveRecord;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(#[from] crate::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "molqi", version, about = "Entanglement experiments for dissociating and colliding atom pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and write its curves.
    Run {
        config: PathBuf,
        /// Output directory, overriding the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Cartesian product of the config's sweep axes.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the available experiment ids.
    ListExperiments,
}

/// Parses `args` and runs the requested command; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("molqi: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            if !cfg.sweep.is_empty() {
                return Err(CliError::Config("config declares sweep axes; use `molqi sweep`".into()));
            }
            let dir = out.unwrap_or_else(|| cfg.output_dir());
            let files = output::run_and_write(&cfg, &cfg.params, &dir, &cfg.stem(), None)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(())
        }
        Command::Sweep { config, workers, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir());
            let summary = sweep::run_sweep(&cfg, &dir, workers)?;
            println!("{}", summary.index.display());
            println!("{} of {} points succeeded", summary.succeeded, summary.total);
            if summary.succeeded == 0 {
                return Err(CliError::Numerical(crate::Error::Validity("every sweep point failed".into())));
            }
            Ok(())
        }
        Command::ListExperiments => {
            for id in ExperimentId::ALL {
                println!("{:<16}{}", id.name(), id.description());
            }
            Ok(())
        }
    }
}
