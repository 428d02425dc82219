//! Parallel path harness.
//!
//! Paths are independent given their stream index, so they are mapped on a
//! dedicated rayon pool and collected in index order. Every reduction runs
//! afterwards on the ordered results, which makes the output identical for
//! any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Runs `f` on `0..n_paths` with `workers` threads and returns the results in
/// path order.
pub fn run_paths<T, F>(n_paths: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    with_workers(workers, || (0..n_paths).into_par_iter().map(&f).collect())
}

/// Runs `op` inside a rayon pool of `workers` threads.
pub fn with_workers<R, F>(workers: usize, op: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> Result<R> + Send,
{
    if workers == 0 {
        return Err(Error::invalid("need at least one worker"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(op)
}

/// Default worker count: `INFODYN_WORKERS`, else the number of CPUs.
pub fn default_workers() -> usize {
    std::env::var("INFODYN_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let out = run_paths(1000, 4, |i| Ok(i * 2)).unwrap();
        assert!(out.iter().enumerate().all(|(i, v)| *v == 2 * i));
        assert!(run_paths(3, 0, Ok).is_err());
    }

    #[test]
    fn errors_propagate() {
        let r = run_paths(10, 2, |i| if i == 7 { Err(Error::invalid("boom")) } else { Ok(i) });
        assert!(r.is_err());
    }
}
