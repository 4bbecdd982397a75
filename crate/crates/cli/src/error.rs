use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use moc_core::MocError;
use serde::Serialize;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERDICT: u8 = 1;
    /// Reserved for clap usage errors.
    pub const USAGE: u8 = 2;
    pub const INPUT: u8 = 3;
    pub const CAPACITY: u8 = 4;
    pub const CONVERGENCE: u8 = 5;
    pub const CLASSIFICATION: u8 = 6;
    pub const IO: u8 = 7;
}

#[derive(Debug)]
pub enum CliError {
    Core(MocError),
    Parse { path: PathBuf, message: String },
    Io { path: PathBuf, source: io::Error },
    Input(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Input(_) => "input",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                MocError::Capacity { .. } => exit::CAPACITY,
                MocError::Convergence { .. } => exit::CONVERGENCE,
                MocError::Classification { .. } => exit::CLASSIFICATION,
                MocError::MissingCertificate => exit::VERDICT,
                _ => exit::INPUT,
            },
            CliError::Parse { .. } | CliError::Input(_) => exit::INPUT,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            code: self.code(),
            message: self.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Parse { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<MocError> for CliError {
    fn from(e: MocError) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub code: &'static str,
    pub message: String,
}
