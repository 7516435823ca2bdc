//! Execution strategy for the data-parallel loops (window scans, Monte
//! Carlo batches, level-synchronous tree expansion).
//!
//! Every parallel path produces output identical to the sequential one.
//! Without the `parallel` feature, [`Exec::Parallel`] runs sequentially.

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    #[default]
    Sequential,
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_vec<T, U, F>(exec: Exec, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = exec;
    items.into_iter().map(f).collect()
}

/// Maps `f` over the inclusive range `lo..=hi`, preserving order.
pub fn map_range<U, F>(exec: Exec, lo: u64, hi: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(u64) -> U + Sync + Send,
{
    if lo > hi {
        return Vec::new();
    }
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (lo..=hi).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (lo..=hi).map(f).collect()
}

/// Sums `f` over `lo..=hi`.
pub fn sum_range<F>(exec: Exec, lo: u64, hi: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    if lo > hi {
        return 0;
    }
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (lo..=hi).into_par_iter().map(f).sum();
    }
    let _ = exec;
    (lo..=hi).map(f).sum()
}

/// Runs `f` on each item and returns the first error by item order.
pub fn try_for_each<T, E, F>(exec: Exec, items: Vec<T>, f: F) -> Result<(), E>
where
    T: Send,
    E: Send,
    F: Fn(T) -> Result<(), E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        let results: Vec<Result<(), E>> = items.into_par_iter().map(f).collect();
        return results.into_iter().collect();
    }
    let _ = exec;
    items.into_iter().try_for_each(f)
}
