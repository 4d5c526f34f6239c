//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (the default) indexed maps run on the rayon
//! global pool; without it they run inline. Results come back in index
//! order either way, so callers that fold them sequentially get identical
//! output regardless of feature flags or thread count.

/// True when this build dispatches to rayon.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, op: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(op).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, op: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(op).collect()
}
