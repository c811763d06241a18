use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] volbreak_core::Error),
    #[error(transparent)]
    Sim(#[from] volbreak_simlab::SimError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Sim(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Config(_) => "config",
            CliError::Core(e) if e.is_numerical() => "numerical",
            CliError::Sim(e) if e.is_numerical() => "numerical",
            CliError::Core(_) | CliError::Sim(_) => "invalid_input",
            CliError::Csv(_) => "csv",
            CliError::Json(_) => "json",
        }
    }

    /// Machine-readable form written to stderr on failure.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            line: Option<u64>,
            exit_code: i32,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        let line = match self {
            CliError::Parse { line, .. } => Some(*line),
            _ => None,
        };
        let w = Wrapper { error: Body { kind: self.kind(), message: self.to_string(), line, exit_code: self.exit_code() } };
        serde_json::to_string(&w).expect("error report serializes")
    }
}
