//! Worker pools and deterministic sharding.

use crate::error::Budget;

/// Budget and worker count shared by the enumeration and sampling drivers.
///
/// Results never depend on `workers`: shards are fixed by the problem size
/// and partial results combine by integer addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub budget: Budget,
    pub workers: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: Budget::default(),
            workers: default_workers(),
        }
    }
}

impl RunOptions {
    pub fn new(budget: Budget, workers: usize) -> Self {
        RunOptions {
            budget,
            workers: workers.max(1),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    /// Runs `f` on a pool of `self.workers` threads.
    pub(crate) fn install<T, F>(&self, f: F) -> T
    where
        T: Send,
        F: FnOnce() -> T + Send,
    {
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Splits `0..total` into consecutive ranges of at most `chunk` elements.
pub(crate) fn shards(total: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    (0..total.div_ceil(chunk))
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .collect()
}
