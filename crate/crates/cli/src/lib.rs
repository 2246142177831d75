//! Command-line harness around `hermite-scaling`: sweeps, fits, transition
//! points and reproduction runs with CSV and gnuplot output.

pub mod config;
pub mod error;
pub mod output;
pub mod reproduce;
pub mod sweep;

pub use error::{exit, CliError, CliResult};
