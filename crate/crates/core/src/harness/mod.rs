//! Experiment harness: configuration, execution, and reporting.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::{run_experiment, RunOptions};
pub use report::{CheckResult, ComparisonReport};
