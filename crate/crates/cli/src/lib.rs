//! Command-line driver for the finite-volume Winter model: runs solvers and
//! scans from flags, presets or replayed JSON documents, and writes
//! versioned CSV/JSON tables.

pub mod args;
pub mod config;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{Command, ConfigError, RunConfig};
pub use presets::{figure_preset, PRESETS};
pub use run::{execute, render, run, RunOutcome, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK};
