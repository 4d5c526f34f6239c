//! Subcommand implementations and the exit-code contract.

pub mod inspect;
pub mod materials;
pub mod poison;
pub mod trigger;
pub mod validate;

use std::fmt::Display;
use std::path::Path;

/// Error classes mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an unusable config/database argument; exit 1.
    Usage(String),
    /// Input data that could not be read, parsed, or processed; exit 2.
    Data(String),
    /// A bug on our side (e.g. serializing our own report failed); exit 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

pub type CmdResult = Result<(), CliError>;

pub fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn data(e: impl Display) -> CliError {
    CliError::Data(e.to_string())
}

pub fn read_file(path: &Path, kind: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {kind} {}: {e}", path.display())))
}

pub fn write_report(path: &Path, value: &impl serde::Serialize) -> CmdResult {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("serializing report: {e}")))?;
    std::fs::write(path, json)
        .map_err(|e| CliError::Data(format!("cannot write report {}: {e}", path.display())))
}
