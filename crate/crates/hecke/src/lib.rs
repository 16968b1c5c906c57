//! IO, configuration, report formats and verification suites on top of
//! `hecke-core`.

pub mod config;
pub mod error;
pub mod exec;
pub mod format;
pub mod report;
pub mod scan;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
