//! Command-line front end: configuration, invariant checks and the `cavity` subcommands.

pub mod app;
pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use error::{CliError, CliResult};
