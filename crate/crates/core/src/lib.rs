//! Cognitive Complexity measurement and the statistics used to relate it to
//! program comprehension data.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod error;
pub mod lexer;
pub mod meta;
pub mod metrics;
pub mod pipeline;
pub mod plot;
pub mod structure;
pub mod study;

pub use error::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "COGSCOPE_THREADS";

/// Runs `f` on a rayon pool limited by `COGSCOPE_THREADS` when it is set to a
/// positive integer, otherwise on the global pool.
pub fn with_thread_limit<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let limit = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match limit.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
