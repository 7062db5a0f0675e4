//! Command-line front end: `certify`, `simulate`, `validate`, `lemma-check`
//! and `convergence`, all driven by a TOML run config.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | bad arguments or config (schema, parameters, missing files) |
//! | 2 | no certificate found |
//! | 3 | simulation blew up or a linear solve failed |
//! | 4 | I/O failure (unreadable config, unwritable output) |
//! | 5 | validation failed |

pub mod commands;
pub mod config;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use pde_iss_core::IssError;

use commands::Loaded;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_BLOWUP: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_VALIDATION: u8 = 5;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "pde-iss",
    version,
    about = "ISS certificates for 1-D semilinear parabolic PDEs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run config (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (certificate JSON, trace CSV or validation report JSON).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a certificate and print it as JSON.
    Certify,
    /// Simulate the scenario and write the energy trace as CSV.
    Simulate,
    /// Simulate and check the energy against the certified bounds.
    Validate,
    /// Randomized check of the trace and interpolation inequalities.
    LemmaCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Spatial convergence study against a manufactured solution.
    Convergence,
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

pub fn fail(code: u8, message: impl Into<String>) -> anyhow::Error {
    Failure {
        code,
        message: message.into(),
    }
    .into()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Exit code for an error escaping a command.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(f) = err.downcast_ref::<Failure>() {
        return f.code;
    }
    if let Some(e) = err.downcast_ref::<IssError>() {
        return match e {
            IssError::InvalidArgument(_) | IssError::UnsupportedBoundary(_) => EXIT_CONFIG,
            IssError::NumericalFailure(_) | IssError::BlowUp { .. } => EXIT_BLOWUP,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return EXIT_IO;
    }
    EXIT_CONFIG
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let load = || -> anyhow::Result<Loaded> {
        let path = cli
            .config
            .as_deref()
            .ok_or_else(|| fail(EXIT_CONFIG, "--config is required for this command"))?;
        Loaded::from_file(path)
    };
    let out = cli.out.as_deref();
    match cli.command {
        Command::Certify => commands::certify(&load()?, out),
        Command::Simulate => commands::simulate_cmd(&load()?, out),
        Command::Validate => commands::validate(&load()?, out),
        Command::LemmaCheck { samples } => commands::lemma_check(samples, cli.seed),
        Command::Convergence => commands::convergence(&load()?),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}
