//! Data-parallel map over owned inputs. With the `parallel` feature (default)
//! this fans out through rayon; without it the same call runs sequentially.
//! Output order matches input order in both builds, so results are
//! reproducible regardless of scheduling.

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    F: Fn(I) -> O,
{
    items.into_iter().map(f).collect()
}
