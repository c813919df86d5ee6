//! Library half of the `qcwalk` command-line tool.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod grid;

pub use error::CliError;
