//! File formats and subcommands of the `exitchoice` command-line tool.

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
mod format;
pub mod tables;

pub use error::{CliError, Result, EXIT_NUMERICAL, EXIT_VALIDATION};
