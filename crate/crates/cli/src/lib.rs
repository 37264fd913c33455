//! Scenario layer for the link simulator: TOML scenario configs, embedded
//! presets, and a deterministic parallel runner that writes CSV artifacts.
//! The `linksim` binary is a thin wrapper over this library so integration
//! tests can drive everything in-process.

pub mod config;
pub mod presets;
pub mod runner;

pub use config::{validate_config, ChannelKind, ScenarioConfig};
pub use runner::{run_scenario, RunOptions, RunSummary};
