//! Order-preserving map over independent work items.
//!
//! With the `parallel` feature the map runs on a rayon pool; without it, or
//! with [`Execution::Sequential`], items are processed in order on the
//! calling thread. Results always come back in input order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Global rayon pool.
    #[default]
    Parallel,
    ParallelWith {
        workers: usize,
    },
}

impl Execution {
    /// `Some(0)` and `None` both mean the default pool.
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            Some(1) => Self::Sequential,
            Some(w) if w > 1 => Self::ParallelWith { workers: w },
            _ => Self::Parallel,
        }
    }

    /// Whether this build can actually run items concurrently.
    pub fn is_concurrent(self) -> bool {
        cfg!(feature = "parallel") && self != Self::Sequential
    }
}

pub fn map_ordered<T, R, F>(items: &[T], execution: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match execution {
            Execution::Sequential => {}
            Execution::Parallel => return items.par_iter().map(&f).collect(),
            Execution::ParallelWith { workers } => {
                if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
                    return pool.install(|| items.par_iter().map(&f).collect());
                }
                return items.par_iter().map(&f).collect();
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = execution;
    items.iter().map(f).collect()
}
