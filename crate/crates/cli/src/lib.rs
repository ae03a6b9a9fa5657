//! Experiment driver for finite Vilenkin groups: configuration, CSV/JSON
//! emission and the five experiments.

pub mod config;
pub mod run;
pub mod table;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigError, Experiment, ExperimentConfig, FamilyChoice, Settings};
pub use run::{run, CliError, Outcome};
pub use table::{Cell, CsvTable};

#[derive(Debug, Parser)]
#[command(name = "vilenkin", version, about = "Experiments on finite Vilenkin groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fast transform against the O(M^2) oracle.
    TransformCheck(Invocation),
    /// Restricted weak-type constants and the H_m growth fit.
    Weaktype(Invocation),
    /// Generalized weak-type table over the test battery.
    Extrapolation(Invocation),
    /// Simple-function approximation with verified maximal bound.
    Lemma1(Invocation),
    /// Exceptional-set measures of the partial sums.
    Convergence(Invocation),
}

#[derive(Debug, Args)]
pub struct Invocation {
    /// JSON file with the same keys as the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

impl Command {
    pub fn split(self) -> (Experiment, Invocation) {
        match self {
            Command::TransformCheck(i) => (Experiment::TransformCheck, i),
            Command::Weaktype(i) => (Experiment::Weaktype, i),
            Command::Extrapolation(i) => (Experiment::Extrapolation, i),
            Command::Lemma1(i) => (Experiment::Lemma1, i),
            Command::Convergence(i) => (Experiment::Convergence, i),
        }
    }
}

pub fn resolve(experiment: Experiment, invocation: Invocation) -> Result<ExperimentConfig, ConfigError> {
    let file = match &invocation.config {
        Some(path) => config::read_settings(path)?,
        None => Settings::default(),
    };
    ExperimentConfig::resolve(experiment, invocation.settings.over(file))
}

/// `out.csv` -> `out.fit.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("fit.json")
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the body to `--out` (or standard output) and the sidecar next to it
/// (or to standard error).
pub fn emit(config: &ExperimentConfig, outcome: &Outcome) -> Result<(), CliError> {
    match &config.out {
        Some(path) => {
            write_file(path, &outcome.body)?;
            if let Some(sidecar) = &outcome.sidecar {
                write_file(&sidecar_path(path), sidecar)?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(outcome.body.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
            if let Some(sidecar) = &outcome.sidecar {
                eprint!("{sidecar}");
            }
        }
    }
    Ok(())
}

/// Parses, runs and emits; returns the process exit code.
pub fn main_with(cli: Cli) -> u8 {
    let (experiment, invocation) = cli.command.split();
    let result = resolve(experiment, invocation)
        .map_err(CliError::from)
        .and_then(|config| {
            let outcome = run(&config)?;
            emit(&config, &outcome)?;
            Ok(outcome)
        });
    match result {
        Ok(outcome) => {
            for v in &outcome.violations {
                eprintln!("violation: {v}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
