//! Driver for the benchmark cases: configuration, execution and artifacts.

pub mod config;
pub mod run;

pub use config::{CaseConfig, Command, ConfigError, RawConfig};
pub use run::{run, RunError, RunSummary, VERSION};
