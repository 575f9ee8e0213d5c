//! Dedicated rayon pools sized by a worker count.

/// Runs `f` on a pool of `workers` threads (0 means the rayon default).
pub fn install<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}
