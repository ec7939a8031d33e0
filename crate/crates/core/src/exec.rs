//! Data-parallel evaluation of independent work items, with a sequential
//! fallback when the `parallel` feature is disabled. Output order always
//! matches input order.

#[cfg(feature = "parallel")]
pub(crate) fn map_values<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_values<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
