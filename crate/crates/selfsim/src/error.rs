//! Errors of the front end and the exit codes they map to.

use std::fmt;

use selfsim_core::Error as CoreError;

/// Syntax error at a 1-indexed line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    /// Undefined name, wrong arity or a misplaced statement, with its line.
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
    #[error("line {line}: {source}")]
    Context { line: usize, source: CoreError },
    #[error("{0}")]
    Io(String),
    #[error("line {line}: {source}")]
    Math { line: usize, source: CoreError },
    /// A `verify` suite or an `assert` did not hold.
    #[error("{0}")]
    Failed(String),
}

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Failed = 1,
    Parse = 2,
    Context = 3,
    Math = 4,
}

impl fmt::Display for ExitCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as i32)
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Parse(_) | CliError::Script { .. } => ExitCode::Parse,
            CliError::Context { .. } | CliError::Io(_) => ExitCode::Context,
            CliError::Math { .. } => ExitCode::Math,
            CliError::Failed(_) => ExitCode::Failed,
        }
    }

    /// Sorts a core error raised on `line` into the context or math class.
    pub fn from_core(line: usize, e: CoreError) -> Self {
        match e {
            CoreError::InvalidContext(_) | CoreError::ContextMismatch { .. } => CliError::Context { line, source: e },
            CoreError::Unknown(s) => CliError::Script { line, message: format!("undefined name {s}") },
            CoreError::Malformed(s) => CliError::Script { line, message: s },
            other => CliError::Math { line, source: other },
        }
    }
}
