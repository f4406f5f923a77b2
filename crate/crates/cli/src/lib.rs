//! Front end of `monopole-spectra`: argument handling, the report envelope and
//! the `spectrum` / `verify` commands.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::fmt;

use clap::Parser;
use monopole_core::SpectraError;

use args::{Cli, Format};
use report::{CommandEcho, Envelope};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;
pub const EXIT_CHECK_FAILED: u8 = 4;

/// Environment variable capping the worker threads of grid sweeps.
pub const THREADS_ENV: &str = "MONOPOLE_SPECTRA_THREADS";

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Convergence(String),
    /// Clap's own output (help, version or a usage error) with its exit code.
    Usage(clap::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Convergence(_) => EXIT_CONVERGENCE,
            CliError::Usage(e) => e.exit_code() as u8,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Convergence(m) => write!(f, "convergence failure: {m}"),
            CliError::Usage(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::ConvergenceFailure { .. } | SpectraError::NoIntersection { .. } => {
                CliError::Convergence(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// A finished run: the report and its rendering in the requested format.
pub struct Outcome {
    pub envelope: Envelope,
    pub rendered: String,
    pub cli: Cli,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.envelope.all_passed() {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

/// Parses `argv` (program name first), merges any config file and runs the command.
pub fn execute(argv: &[String]) -> Result<Outcome, CliError> {
    let first = Cli::try_parse_from(argv).map_err(CliError::Usage)?;
    let cli = match &first.opts.config {
        Some(path) => {
            let entries = config::load(path)?;
            Cli::try_parse_from(config::merge(argv, &entries)).map_err(CliError::Usage)?
        }
        None => first,
    };

    let pool = thread_pool()?;
    let (name, params, results, checks) = pool.install(|| commands::dispatch(&cli))?;
    let envelope = Envelope {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: CommandEcho {
            name,
            argv: argv.iter().skip(1).cloned().collect(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        },
        params,
        results,
        checks,
    };
    let rendered = match cli.opts.format {
        Format::Json => envelope.to_json(),
        Format::Csv => envelope.to_csv(),
        Format::Plain => envelope.to_plain(),
    };
    Ok(Outcome { envelope, rendered, cli })
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Invalid(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start worker threads: {e}")))
}
