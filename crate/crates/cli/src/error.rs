use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed scenario, or bad command-line values.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Model(#[from] acqtime::Error),

    /// One or more validation checks failed.
    #[error("{0} validation check(s) failed")]
    Validation(usize),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(line: usize, key: Option<&str>, msg: impl std::fmt::Display) -> Self {
        match key {
            Some(k) => CliError::Parse(format!("line {line}, key `{k}`: {msg}")),
            None => CliError::Parse(format!("line {line}: {msg}")),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Validation(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Model(_) => 3,
        })
    }
}
