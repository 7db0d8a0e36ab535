pub mod curve;
pub mod optimum;
pub mod ratio;
pub mod search;
pub mod table;
pub mod verify;

use cevopt_core::{CevianConfig, Error};

use crate::output::Format;
use crate::Config;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Internal(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(s) | Failure::Io(s) | Failure::Internal(s) => s,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::Io(_) | Error::Checkpoint { .. } => Failure::Io(text),
            e if e.is_usage() => Failure::Usage(text),
            _ => Failure::Internal(text),
        }
    }
}

/// What a command produced. `verified` is false when a check failed but
/// the output is still worth printing.
pub struct Report {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub verified: bool,
}

impl Report {
    pub fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: Vec::new(),
            verified: true,
        }
    }
}

pub fn config(c: &Config) -> Result<CevianConfig, Failure> {
    Ok(CevianConfig::new(c.n, c.k)?)
}

pub fn unsupported(command: &str, format: Format) -> Failure {
    let name = match format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Failure::Usage(format!("{command} does not support --format {name}"))
}
