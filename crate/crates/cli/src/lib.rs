//! Scenario files, sweeps and CSV output on top of `lifshitz-core`.

pub mod commands;
pub mod force;
pub mod output;
pub mod scenario;
pub mod selftest;

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool for `None`.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> anyhow::Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
    }
}

/// Without the `parallel` feature everything runs on the calling thread.
#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> anyhow::Result<R> {
    Ok(f())
}
