use rayon::prelude::*;

use kplane_core::montecarlo::{Executor, Moments};

/// Executor that spreads sample blocks over the current rayon pool.
///
/// Blocks come back in index order, so merged moments are identical for
/// any thread count.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pool;

impl Executor for Pool {
    fn map_blocks(&self, blocks: usize, job: &(dyn Fn(usize) -> Moments + Sync)) -> Vec<Moments> {
        (0..blocks).into_par_iter().map(job).collect()
    }
}

/// Runs `f` inside a pool with `threads` workers, or the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, rayon::ThreadPoolBuildError> {
    match threads {
        None => Ok(f()),
        Some(t) => Ok(rayon::ThreadPoolBuilder::new().num_threads(t).build()?.install(f)),
    }
}
