//! Data-parallel map helpers. With the `parallel` feature (default) these run
//! on the rayon pool; the sequential fallback is always available so both
//! paths can be exercised and benchmarked.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[cfg_attr(feature = "parallel", default)]
    Rayon,
}

/// Maps `f` over `items`, preserving input order in the output.
pub fn map_collect<T, U, F>(mode: Parallelism, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        Parallelism::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
    }
}
