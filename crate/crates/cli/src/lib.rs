//! Experiment runner for `impactbandit`: configuration files, subcommands and
//! CSV / gnuplot output.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use error::{CliError, Result};
