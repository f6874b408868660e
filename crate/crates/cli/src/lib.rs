//! The `kfree` command line: argument grammar, report assembly and artifact
//! writers. [`run`] does everything except touching the process exit status,
//! so tests can drive it directly.

pub mod config;
pub mod emit;

mod commands;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::json;

use config::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] kfree::Error),
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
    #[error("{message}")]
    Check { message: String },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Engine(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::Check { .. } => "CheckFailed",
        }
    }

    /// 1 for malformed input, 2 for everything the engines report.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(kfree::Error::Parse(_) | kfree::Error::BadExponent { .. }) => 1,
            _ => 2,
        }
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Report<'a> {
    version: &'static str,
    config: &'a Command,
    result: serde_json::Value,
}

fn execute(cmd: &Command) -> Result<serde_json::Value, CliError> {
    match cmd {
        Command::Sieve(a) => commands::sieve_cmd(a),
        Command::Density(a) => commands::density_cmd(a),
        Command::Correlate(a) => commands::correlate_cmd(a),
        Command::Predict(a) => commands::predict_cmd(a),
        Command::Spectrum(a) => commands::spectrum_cmd(a),
        Command::Annihilator(a) => commands::annihilator_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
    }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports are plain data");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                    if e.exit_code() == 0 =>
                {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let result = match cli.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cli.command)),
            Err(e) => Err(CliError::Check { message: format!("cannot start {n} workers: {e}") }),
        },
        None => execute(&cli.command),
    };
    match result {
        Ok(result) => Outcome {
            code: 0,
            stdout: pretty(&Report { version: kfree::VERSION, config: &cli.command, result }),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: pretty(&json!({ "error": { "kind": e.kind(), "message": e.to_string() } })),
            stderr: format!("error: {e}\n"),
        },
    }
}
