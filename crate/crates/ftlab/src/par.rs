//! Thin switch between rayon and plain iteration, selected by the
//! `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `items.map(f).collect()`, in parallel when the feature is enabled.
pub fn map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Folds `0..n` into per-worker accumulators and merges them. `merge` must
/// be commutative and associative for the result to be order independent.
/// With `parallel == false`, or without the feature, runs on the caller's
/// thread.
pub fn fold_range<A: Send>(
    parallel: bool,
    n: u64,
    init: impl Fn() -> A + Sync + Send,
    step: impl Fn(A, u64) -> A + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> A {
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().fold(&init, &step).reduce(&init, &merge);
    }
    let _ = (parallel, &merge);
    (0..n).fold(init(), step)
}
