//! Command-line front end: space documents, reports and the `dist`, `gen` and
//! `check` subcommands.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

pub use commands::{cmd_check, cmd_dist, cmd_gen, run, Cli, Command, DistKind, DistOptions, GenKind, Suite};
pub use document::Document;
pub use error::CliError;
pub use report::{Format, Report};
