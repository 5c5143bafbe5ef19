//! `qillum`: deterministic CSV/JSON tables for TMSV states, Wigner slices,
//! squeezing spectra, detection envelopes and Chernoff exponents.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::detect::DetectArgs;
use commands::qcb::QcbArgs;
use commands::spectrum::SpectrumArgs;
use commands::state::StateArgs;
use commands::wigner::WignerArgs;
use config::{FileConfig, Layered};
use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qillum_core::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("output error: {0}")]
    Output(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl CliError {
    /// 3 for numerical failures, 2 for everything the caller can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qillum", version, about, long_about = None)]
struct Cli {
    /// Flat TOML file with parameter values; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the table to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Suppress the summary line on standard error
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fock amplitudes of the two-mode squeezed vacuum
    #[command(allow_negative_numbers = true)]
    State(StateArgs),
    /// Wigner-function slice on a grid
    #[command(allow_negative_numbers = true)]
    Wigner(WignerArgs),
    /// Squeezing-parameter profile and squeezing/gain spectrum
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Error-rate exponents and error-probability envelopes
    #[command(allow_negative_numbers = true)]
    Detect(DetectArgs),
    /// Quantum Chernoff exponents from truncated Fock states
    #[command(allow_negative_numbers = true)]
    Qcb(QcbArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let format = cli.format.or(file.format).unwrap_or(Format::Csv);
    let output = cli.output.clone().or_else(|| file.output.clone());
    let quiet = cli.quiet || file.quiet.unwrap_or(false);

    let report = match cli.command {
        Command::State(a) => commands::state::run(a.over(file.args("state")?))?,
        Command::Wigner(a) => commands::wigner::run(a.over(file.args("wigner")?))?,
        Command::Spectrum(a) => commands::spectrum::run(a.over(file.args("spectrum")?))?,
        Command::Detect(a) => commands::detect::run(a.over(file.args("detect")?))?,
        Command::Qcb(a) => commands::qcb::run(a.over(file.args("qcb")?))?,
    };
    let text = report.render(format)?;
    match &output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string()))?,
    }
    if !quiet {
        let dest = output.map_or("standard output".to_string(), |p| p.display().to_string());
        eprintln!(
            "qillum {}: {} rows written to {dest}",
            report.command,
            report.rows.len()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qillum: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
