//! Worker-pool sizing.

use log::warn;

pub const THREADS_ENV: &str = "TOPICATLAS_THREADS";

/// Sizes the global rayon pool from `TOPICATLAS_THREADS`, if set. Returns
/// the thread count in effect. Only the first call can change the pool.
pub fn configure_threads_from_env() -> usize {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
                    warn!("worker pool already initialized; ignoring {THREADS_ENV}={n}");
                }
            }
            _ => warn!("ignoring invalid {THREADS_ENV}={raw:?}"),
        }
    }
    rayon::current_num_threads()
}
