//! Command-line front end for the `qfsplit` library: single checks, batch
//! runs over JSON Lines catalogs, and Witt vector arithmetic.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

/// Exit code for malformed input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}
