//! The `nlshock` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 solver error.

pub mod analyze;
pub mod config;
pub mod sweep;
pub mod verify;

use clap::{Parser, Subcommand};
use nalgebra::Matrix4;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub use analyze::{analyze, AnalysisReport, BranchReport};
pub use config::{Format, ScenarioConfig};
pub use sweep::{sweep, SweepSpec};
pub use verify::{verify, VerifyReport};

use crate::lagrangian::ModelKind;

/// Version tag of the JSON and CSV outputs.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nlshock", version, about = "Shock fronts, optical metrics and birefringence in nonlinear electrodynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve both characteristic branches for one scenario.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output.format` from the config.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Vary one scenario parameter and write the results as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check structural invariants on the scenario and on seeded random ones.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the built-in Lagrangians.
    Models,
}

/// `path: message`, or just the message for errors at the document root.
pub(crate) fn located<E: std::fmt::Display>(e: serde_path_to_error::Error<E>) -> CliError {
    let path = e.path().to_string();
    if path == "." {
        CliError::Config(e.inner().to_string())
    } else {
        CliError::Config(format!("{path}: {}", e.inner()))
    }
}

pub(crate) fn matrix_rows(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

/// The `models` listing.
pub fn models_listing() -> String {
    let mut s = String::from("Built-in models (natural units, F = |B|² - |E|², G = -E·B, fields in units of b):\n\n");
    for kind in ModelKind::ALL {
        let (formula, note) = match kind {
            ModelKind::Maxwell => ("L = -F/2", "linear vacuum electrodynamics"),
            ModelKind::Born => ("L = -(sqrt(1 + F) - 1)", "M. Born, 1933; birefringent"),
            ModelKind::BornInfeld => ("L = -(sqrt(1 + F - G²) - 1)", "M. Born and L. Infeld, 1934; no birefringence"),
            ModelKind::PlebanskiCustom => {
                ("L(F, G) = Σ c F^i G^j, or fixed derivative values", "user-supplied via model.custom")
            }
        };
        s.push_str(&format!("  {:<17} {:<50} {note}\n", kind.name(), formula));
    }
    s
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run_command(command: Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Analyze { config, format } => {
            let config = ScenarioConfig::load(&config)?;
            let report = analyze(&config)?;
            let text = analyze::render(&report, format.unwrap_or(config.output.format))?;
            write_output(config.output.path.as_deref(), &text, stdout)?;
            Ok(if report.has_failures() { 3 } else { 0 })
        }
        Command::Sweep { config, spec, out } => {
            let config = ScenarioConfig::load(&config)?;
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", spec.display())))?;
            let spec = SweepSpec::from_json(&text)?;
            let csv = sweep(&config, &spec)?;
            write_output(Some(&out), &csv, stdout)?;
            Ok(0)
        }
        Command::Verify { config } => {
            let config = ScenarioConfig::load(&config)?;
            let report = verify(&config)?;
            write_output(None, &report.render(), stdout)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Models => {
            write_output(None, &models_listing(), stdout)?;
            Ok(0)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match run_command(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
