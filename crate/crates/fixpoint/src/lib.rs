//! Command-line harness for fixed-point iteration experiments: JSON
//! configuration, CSV traces and JSON check reports on top of `fixpoint-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod trace_csv;

pub use error::{CliError, Outcome};
