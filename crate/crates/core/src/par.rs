//! Ordered map over independent work items, parallel when the `parallel`
//! feature is on and more than one worker is requested.

/// Applies `f` to every item and returns the results in input order.
///
/// With `workers == 1`, or without the `parallel` feature, this is a plain
/// sequential map on the calling thread.
pub fn ordered_map<T, R, F>(items: Vec<T>, workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 && items.len() > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("could not build thread pool");
        return pool.install(|| items.into_par_iter().map(f).collect());
    }
    let _ = workers;
    items.into_iter().map(f).collect()
}

/// Whether this build can run work in parallel.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Default worker count: available hardware threads, or 1 without `parallel`.
pub fn default_workers() -> usize {
    if parallel_enabled() {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        1
    }
}
