//! Experiment driver for `sfc-index`: static construction timing, batched
//! query throughput, insert-then-query runs and workload replay.

pub mod clock;
pub mod runner;
pub mod selftest;
pub mod throughput;

use thiserror::Error;

pub use clock::{Clock, MonotonicClock};
pub use runner::{replay, replay_workload, run_dynamic, run_static, BenchConfig, ReplayOptions, ReplayOutcome, Structure};
pub use throughput::{throughput, time_limit, Throughput, DEFAULT_BATCH};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Index(#[from] sfc_index::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
