use std::path::PathBuf;

use thiserror::Error;

/// Process exit status. The codes are disjoint by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Success = 0,
    ConfigError = 1,
    Divergence = 2,
    CheckFailure = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Severity order used when several configs are combined: config errors
    /// first, then divergence, then check failures.
    pub fn worst(self, other: Outcome) -> Outcome {
        let rank = |o: Outcome| match o {
            Outcome::ConfigError => 3,
            Outcome::Divergence => 2,
            Outcome::CheckFailure => 1,
            Outcome::Success => 0,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config schema violation at {field}: {message}")]
    Schema { field: String, message: String },
    #[error("invalid config at {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    pub fn outcome(&self) -> Outcome {
        Outcome::ConfigError
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
