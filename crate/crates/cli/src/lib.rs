//! Configuration, pipelines and reports for the `graphwh` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod oracle;
pub mod report;
pub mod sampling;

pub use commands::{run, CommandName};
pub use config::ExperimentConfig;
pub use report::Report;
