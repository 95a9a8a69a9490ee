//! Config-driven benchmark harness for quantum generative models: config
//! and backend-profile parsing, run orchestration, crash-safe run records,
//! aggregation and figure tables. Numerics live in `genbench-core`.

pub mod config;
mod error;
pub mod harness;
pub mod profile;
pub mod record;

pub use error::{BenchError, Result};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GENBENCH_OUT";
