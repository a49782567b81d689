//! Command-line driver for `zerogap-core`: config files, report formats,
//! parallel evaluation and the `verify`, `ratio`, `scan`, `optimize` and
//! `euler` commands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;
pub mod report;
pub mod verify;

pub use commands::{run, RunManifest};
pub use error::{CliError, CliResult};
