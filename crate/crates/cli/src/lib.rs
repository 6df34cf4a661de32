//! Command-line front end: parses an instance file, runs one command and
//! renders a deterministic report.

pub mod commands;
pub mod instance;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use instance::{Instance, Overrides};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) | Self::Io { .. } => 2,
            Self::Inconsistent(_) => 3,
            Self::Numerical(_) => 4,
        }
    }
}

impl From<liftspec::Error> for CliError {
    fn from(e: liftspec::Error) -> Self {
        use liftspec::Error as E;
        let text = e.to_string();
        match e {
            E::MalformedCycle { .. }
            | E::RepeatedPoint { .. }
            | E::PointOutOfRange { .. }
            | E::UnknownFamily(_) => Self::Parse(text),
            E::ZeroDegree
            | E::DegreeMismatch { .. }
            | E::OrderCapExceeded { .. }
            | E::NotASubgroup(_)
            | E::InvalidFamilyParam { .. }
            | E::InvalidGraph(_)
            | E::Disconnected
            | E::DirectedUnsupported
            | E::GroupMismatch
            | E::TooManyPowerSums(_) => Self::Inconsistent(text),
            _ => Self::Numerical(text),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "liftspec",
    version,
    about = "Spectra and eigenvectors of graph lifts"
)]
pub struct Cli {
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    /// Relative singular-value cutoff for ranks of subgroup sums.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Eigen-residual tolerance.
    #[arg(long, global = true)]
    pub tol_residual: Option<f64>,
    /// Tolerance for matching spectra against the dense oracle.
    #[arg(long, global = true)]
    pub tol_match: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lift spectrum with per-irrep provenance.
    Spectrum { instance: PathBuf },
    /// Lift eigenvector columns and the selected independent subset.
    Eigvecs { instance: PathBuf },
    /// The lift graph as an edge list, or as JSON with `--emit-adjacency`.
    Lift {
        instance: PathBuf,
        #[arg(long)]
        emit_adjacency: bool,
    },
    /// Compare against a dense eigensolver on randomized voltage assignments.
    Verify {
        instance: PathBuf,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Defaults to the instance's `options.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Regular-lift spectrum from power sums of characters.
    Characters { instance: PathBuf },
    /// The group and its irreducible representations.
    Irreps {
        instance: PathBuf,
        #[arg(long)]
        dump: bool,
    },
}

impl Command {
    fn instance_path(&self) -> &PathBuf {
        match self {
            Self::Spectrum { instance }
            | Self::Eigvecs { instance }
            | Self::Lift { instance, .. }
            | Self::Verify { instance, .. }
            | Self::Characters { instance }
            | Self::Irreps { instance, .. } => instance,
        }
    }
}

/// What a run printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `args` (including the program name) in-process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: report.text,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// A rendered report with its exit code; `verify` exits non-zero on failed trials.
pub struct Report {
    pub code: i32,
    pub text: String,
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let path = cli.command.instance_path();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let overrides = Overrides {
        tol_rank: cli.tolerances.tol_rank,
        tol_residual: cli.tolerances.tol_residual,
        tol_match: cli.tolerances.tol_match,
    };
    let instance = Instance::parse(&text, &overrides)?;
    let ok = |text: String| Ok(Report { code: 0, text });
    match &cli.command {
        Command::Spectrum { .. } => ok(commands::spectrum(&instance)?),
        Command::Eigvecs { .. } => ok(commands::eigvecs(&instance)?),
        Command::Lift { emit_adjacency, .. } => ok(commands::lift(&instance, *emit_adjacency)),
        Command::Verify { trials, seed, .. } => {
            let (passed, text) =
                commands::verify(&instance, *trials, seed.unwrap_or(instance.seed))?;
            Ok(Report {
                code: if passed { 0 } else { 4 },
                text,
            })
        }
        Command::Characters { .. } => ok(commands::characters(&instance)?),
        Command::Irreps { dump, .. } => ok(commands::irreps(&instance, *dump)?),
    }
}
