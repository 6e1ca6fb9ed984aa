//! Command-line front end and file formats for `isochron-core`.
//!
//! A single JSON configuration describes the system and the analysis
//! parameters; every artifact embeds the SHA-256 of the effective
//! configuration and the tool version.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use commands::{run, Artifacts, Command};
pub use config::{AnalysisConfig, OutputFormat, Overrides};
pub use error::CliError;
