//! File formats, run configuration and the command-line driver for
//! `stochseir-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;

pub use commands::{run, Cli, Command};
pub use error::{CliError, ExitClass};
