//! Thin switch between rayon and sequential iteration.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `true` iff `f(i)` holds for every `i < n`.
pub(crate) fn all<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().all(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).all(f)
    }
}

/// Order-preserving map over `0..n`.
pub(crate) fn map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
