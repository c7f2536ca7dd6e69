//! Library side of the command-line runner: configuration ingestion, bundled
//! presets, verification checkpoints, serialization and the subcommand
//! implementations. The binary in `main.rs` is a thin argument-parsing shell
//! over this crate so integration tests can drive the same code paths.

pub mod checkpoints;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;
