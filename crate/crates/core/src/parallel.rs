//! Data-parallel execution over independent items.
//!
//! With the `parallel` feature (default) work fans out over rayon; without it
//! every mode runs sequentially. Results always come back in input order, so
//! output does not depend on the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    /// Use the global rayon pool.
    #[default]
    Parallel,
    /// Use a dedicated pool with this many threads.
    Workers(usize),
}

impl ExecMode {
    /// `--workers` semantics: 1 is sequential, 0 uses all cores.
    pub fn from_workers(workers: usize) -> Self {
        match workers {
            0 => ExecMode::Parallel,
            1 => ExecMode::Sequential,
            n => ExecMode::Workers(n),
        }
    }

    pub fn is_parallel_enabled() -> bool {
        cfg!(feature = "parallel")
    }

    /// Maps `f` over `items` with per-worker state created by `init`.
    pub fn map_init<T, S, R, I, F>(self, items: &[T], init: I, f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, &T) -> R + Sync + Send,
    {
        match self {
            ExecMode::Sequential => {
                let mut state = init();
                Ok(items.iter().map(|x| f(&mut state, x)).collect())
            }
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => Ok(items.par_iter().map_init(&init, &f).collect()),
            #[cfg(feature = "parallel")]
            ExecMode::Workers(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
                Ok(pool.install(|| items.par_iter().map_init(&init, &f).collect()))
            }
            #[cfg(not(feature = "parallel"))]
            ExecMode::Parallel | ExecMode::Workers(_) => {
                ExecMode::Sequential.map_init(items, init, f)
            }
        }
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_init(items, || (), |_, x| f(x))
    }
}

/// Order-preserving `filter_map` over a slice, parallel when available.
pub(crate) fn filter_map_slice<'a, T, R, F>(items: &'a [T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&'a T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().filter_map(f).collect()
    }
}
