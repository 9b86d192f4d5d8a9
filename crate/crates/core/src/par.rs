//! Thin switch between rayon-backed and sequential evaluation.
//!
//! Every call site is a pure map over independent work items, so the results
//! are identical whichever backend runs them; the `parallel` feature only
//! changes wall-clock time.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_items<'a, I, T, F>(items: &'a [I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&'a I) -> T + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_items<'a, I, T, F>(items: &'a [I], f: F) -> Vec<T>
where
    F: Fn(&'a I) -> T,
{
    items.iter().map(f).collect()
}
