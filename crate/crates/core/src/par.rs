//! Data-parallel helpers with a sequential fallback when the `parallel`
//! feature is disabled. Results are always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `0..count` and returns the lowest index whose result is `Some`.
#[cfg(feature = "parallel")]
pub fn find_first<R, F>(count: usize, f: F) -> Option<(usize, R)>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    (0..count)
        .into_par_iter()
        .find_map_first(|i| f(i).map(|r| (i, r)))
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<R, F>(count: usize, f: F) -> Option<(usize, R)>
where
    F: Fn(usize) -> Option<R>,
{
    (0..count).find_map(|i| f(i).map(|r| (i, r)))
}

/// Maps `f` over `0..count`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_range<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(count: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..count).map(f).collect()
}
