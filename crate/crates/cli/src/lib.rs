//! Command-line experiment harness around the `msyds` library.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;

pub use commands::run;
pub use error::{CliError, CliResult};
