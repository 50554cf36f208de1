//! Library side of the `werner` command-line tool: report schema, renderers
//! and the subcommand implementations.

pub mod commands;
pub mod report;

pub use commands::{CliError, Method};
pub use report::{render, Check, Format, Output, RunReport};
