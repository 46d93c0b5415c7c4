//! Batch execution: apply a pure function to many inputs.
//!
//! With the `parallel` feature (default) `map_batch` fans out over a rayon
//! thread pool; without it, it is an alias for the sequential version.
//! Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_batch_seq<T, U, F>(inputs: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    inputs.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_batch<T, U, F>(inputs: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    inputs.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_batch<T, U, F>(inputs: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    map_batch_seq(inputs, f)
}
