//! Configuration, experiment harness and result output for the IRS
//! planner.

pub mod config;
pub mod experiment;
pub mod output;

pub use config::{ConfigError, ExperimentConfig};
pub use experiment::{bound, deploy, run, sweep, ExperimentError, RunOutput};
pub use output::ResultRecord;
