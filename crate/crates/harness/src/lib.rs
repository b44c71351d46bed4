//! Command-line driver for `lqgame`: file formats, benchmark sweeps and JSON reports.

// Negated comparisons are deliberate: NaN inputs must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod report;

pub use bench::{log_log_slope, parse_grid, run_benchmark, BenchConfig, BenchRecord, BenchResult, BenchSolver};
pub use commands::{run, Outcome};
pub use config::{Mode, Overrides, RunConfig};
pub use error::{HarnessError, Result};
pub use format::{load_instance, LoadedInstance};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "LQG_THREADS";

/// Sizes the global rayon pool from `LQG_THREADS`, if set. Call once, early.
pub fn init_thread_pool() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| HarnessError::Usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // A pool that is already built keeps its size; that only happens in tests.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}
