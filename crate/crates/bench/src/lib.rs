//! Benchmark harness for the proxsplit solver: experiment configuration,
//! seeded suite execution, and CSV reporting. The `bench` binary is a thin
//! CLI over this library.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{parse_config, ExperimentConfig, GammaMode, Suite};
pub use runner::{run_suite, snr_db, CaseSummary, SuiteOutcome};
