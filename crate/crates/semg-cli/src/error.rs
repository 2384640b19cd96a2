//! CLI error categories mapped to process exit codes.

use std::fmt;

/// Exit code 2: bad arguments, bad config, or unreadable/invalid input.
/// Exit code 3: a computation failed on valid-looking input.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    /// Single-line machine-parsable form: `error: <category>: <message>`.
    pub fn diagnostic(&self) -> String {
        let (category, message) = match self {
            CliError::Validation(m) => ("validation", m),
            CliError::Runtime(m) => ("runtime", m),
        };
        let one_line = message.replace('\n', "; ");
        format!("error: {category}: {one_line}")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

pub fn validation(message: impl Into<String>) -> CliError {
    CliError::Validation(message.into())
}

pub fn runtime(message: impl Into<String>) -> CliError {
    CliError::Runtime(message.into())
}

/// Wraps a library error that occurred while computing on accepted input.
pub fn lib_runtime(err: semg::Error) -> CliError {
    CliError::Runtime(err.to_string())
}
