//! Time-limited batched query loop.

use std::time::Duration;

use crate::clock::Clock;
use crate::{BenchError, Result};

pub const DEFAULT_BATCH: usize = 1024;

/// `min(n / 10^6, 10)` seconds.
pub fn time_limit(n: usize) -> Duration {
    Duration::from_secs_f64((n as f64 / 1e6).min(10.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Throughput {
    pub elapsed: Duration,
    pub queries: u64,
    /// Total reported points, kept so result materialization is not optimized out.
    pub results: u64,
}

impl Throughput {
    pub fn latency_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1e3 / self.queries as f64
    }
}

/// Runs whole batches of `queries`, cycling through the stream, until the
/// elapsed time after a batch reaches `limit`. At least one batch runs.
pub fn throughput<Q>(
    queries: &[Q],
    limit: Duration,
    batch: usize,
    clock: &dyn Clock,
    mut run: impl FnMut(&Q) -> usize,
) -> Result<Throughput> {
    if queries.is_empty() {
        return Err(BenchError::Config("query stream is empty".into()));
    }
    if batch == 0 {
        return Err(BenchError::Config("batch size must be positive".into()));
    }
    let start = clock.now();
    let mut next = 0;
    let mut executed = 0u64;
    let mut results = 0u64;
    loop {
        for _ in 0..batch {
            results += run(&queries[next]) as u64;
            next += 1;
            if next == queries.len() {
                next = 0;
            }
        }
        executed += batch as u64;
        let elapsed = clock.now().saturating_sub(start);
        if elapsed >= limit {
            return Ok(Throughput {
                elapsed,
                queries: executed,
                results,
            });
        }
    }
}
