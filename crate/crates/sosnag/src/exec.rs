use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};
use sosnag_core::exec::Executor;

/// Runs jobs on a dedicated rayon pool; results keep index order.
pub struct Rayon {
    pool: ThreadPool,
}

impl Rayon {
    /// `threads == 0` uses rayon's default (one per core).
    pub fn new(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        Ok(Rayon { pool: ThreadPoolBuilder::new().num_threads(threads).build()? })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Rayon {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(&f).collect())
    }
}
