pub mod depth;
pub mod enumerate;
pub mod flows;
pub mod gap;
pub mod lemmas;
pub mod mixing;

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::ExperimentError;
use crate::row::ResultRow;

pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

/// Runs `f` for each n in `lo..=hi` (in parallel) and concatenates the rows in n order.
pub(crate) fn per_n<F>(lo: usize, hi: usize, f: F) -> Result<Vec<ResultRow>, ExperimentError>
where
    F: Fn(usize) -> Result<Vec<ResultRow>, ExperimentError> + Sync,
{
    let parts: Vec<Result<Vec<ResultRow>, ExperimentError>> = (lo..=hi).into_par_iter().map(&f).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}
