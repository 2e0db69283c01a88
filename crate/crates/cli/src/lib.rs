//! `arstat`: verification reports for generalized A_r quantum statistics.
//!
//! [`run`] parses arguments, merges an optional TOML config file (command-line
//! flags win), executes one command and renders its report. The binary is a
//! thin wrapper that prints the result and exits with its code:
//!
//! * `0` every check passed,
//! * `1` a check failed (including quadrature that did not converge),
//! * `2` the configuration was rejected.

mod cli;
mod commands;
mod parse;
pub mod report;

use std::ffi::OsString;
use std::fs;

use clap::Parser;

pub use cli::{Cli, Command, FileConfig, Format};
pub use parse::parse_point;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub code: i32,
    /// Report text when it goes to standard output.
    pub stdout: String,
    pub stderr: String,
}

impl RunResult {
    fn config_error(message: impl std::fmt::Display) -> Self {
        RunResult {
            code: EXIT_CONFIG,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> RunResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            };
            let text = err.render().to_string();
            return if err.use_stderr() {
                RunResult {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                RunResult {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let file = match &cli.global.config {
        None => FileConfig::default(),
        Some(path) => match fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))
            .and_then(|text| {
                toml::from_str::<FileConfig>(&text).map_err(|e| format!("{}: {e}", path.display()))
            }) {
            Ok(f) => f,
            Err(msg) => return RunResult::config_error(msg),
        },
    };
    let threads = cli.global.threads.or(file.threads).unwrap_or(0);
    let format = cli.global.format.or(file.format).unwrap_or_default();
    let output = cli.global.output.clone().or_else(|| file.output.clone());
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return RunResult::config_error(format!("thread pool: {e}")),
    };
    let command = cli.command.name();
    let result = pool.install(|| commands::execute(&cli, &file));
    let (config, outcome) = match result {
        Ok(v) => v,
        Err(commands::Failure::Config(msg)) => return RunResult::config_error(msg),
        Err(commands::Failure::Check(msg)) => {
            return RunResult {
                code: EXIT_CHECK_FAILED,
                stdout: String::new(),
                stderr: format!("check failed: {msg}\n"),
            }
        }
    };
    let text = match format {
        Format::Json => report::to_json(command, &config, &outcome),
        Format::Csv => match report::to_csv(&outcome) {
            Ok(t) => t,
            Err(e) => return RunResult::config_error(format!("csv: {e}")),
        },
    };
    let code = if outcome.pass() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    };
    let mut stderr = String::new();
    for c in outcome.checks.iter().filter(|c| !c.pass) {
        stderr.push_str(&format!(
            "FAIL {}: residual {} > tolerance {}\n",
            c.name,
            report::fmt_f64(c.residual),
            report::fmt_f64(c.tolerance)
        ));
    }
    match output {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                return RunResult::config_error(format!("cannot write {}: {e}", path.display()));
            }
            RunResult {
                code,
                stdout: String::new(),
                stderr,
            }
        }
        None => RunResult {
            code,
            stdout: text,
            stderr,
        },
    }
}
