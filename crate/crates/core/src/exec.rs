//! Execution policy for data-parallel sweeps. Results never depend on the
//! policy or the worker count; only wall-clock time does.

/// How independent work items are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// The global rayon pool. Sequential when the `parallel` feature is off.
    #[default]
    Parallel,
    /// A dedicated pool of this many threads.
    Workers(usize),
}

impl Execution {
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            Some(1) => Execution::Sequential,
            Some(n) => Execution::Workers(n),
            None => Execution::Parallel,
        }
    }

    /// Maps `f` over `items`, keeping input order in the output.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            #[cfg(feature = "parallel")]
            Execution::Workers(n) => {
                use rayon::prelude::*;
                match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                    Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
                    Err(_) => items.iter().map(f).collect(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            _ => items.iter().map(f).collect(),
        }
    }
}
