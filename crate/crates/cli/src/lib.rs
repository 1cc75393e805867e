//! Library side of the `assocarray` command: the query interpreter, the law
//! checker report and the rewrite benchmarks.

pub mod bench;
pub mod check;
pub mod query;

use std::fmt;

/// A command failure, split by exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments, unreadable input or a malformed script (exit 1).
    Usage(String),
    /// A law, contract or cross-check failed (exit 2).
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

pub(crate) fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}
