//! Command-line frontend for `jordan2`.
//!
//! Exit codes: 0 success, 1 usage / I/O / schema / domain error, 2 when the
//! input breaks a mathematical law (or an identity in the suite fails).

pub mod args;
pub mod commands;
pub mod output;
pub mod spec;

use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command};
pub use spec::{FormSpec, MatrixJson, Model};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// An error carrying the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_ERROR,
            message: msg.into(),
        }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_ERROR,
            message: msg.into(),
        }
    }

    pub fn io(path: &str, err: std::io::Error) -> Self {
        CliError {
            code: EXIT_ERROR,
            message: format!("cannot read {path}: {err}"),
        }
    }

    pub fn violation(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VIOLATION,
            message: msg.into(),
        }
    }

    pub fn from_core(err: jordan2::Error) -> Self {
        let code = if err.is_contract_violation() {
            EXIT_VIOLATION
        } else {
            EXIT_ERROR
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Parses `argv` and runs the command. Returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let env = |k: &str| std::env::var(k).ok();
    match commands::dispatch(&cli, &env, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code
        }
    }
}
