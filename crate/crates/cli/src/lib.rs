//! Command-line front end: configuration files, the analysis report and the
//! subcommands of the `stationary` binary.

pub mod commands;
pub mod config;
pub mod report;
