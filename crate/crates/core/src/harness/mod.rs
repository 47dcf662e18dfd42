//! Closed-loop scenario runner, metrics, trace files and configuration.

pub mod config;
pub mod metrics;
pub mod scenario;
pub mod trace;

pub use config::HarnessConfig;
pub use metrics::Metrics;
pub use scenario::{run_scenario, ControllerConfig, ControllerKind, ScenarioConfig, CATALOG};
pub use trace::{Trace, TraceRecord};
