//! Worker pool and the parallel sweep.

use anyhow::{Context, Result};
use quadsweep_core::sweep::Partial;
use quadsweep_core::{Dataset, Lift, Objective, QuadraticSweep, SweepResult};
use rayon::prelude::*;

/// Caps the worker pool when set to a positive integer.
pub const THREADS_ENV: &str = "QUADSWEEP_THREADS";

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
            anyhow::ensure!(n > 0, "{THREADS_ENV} must be positive");
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}

/// Runs `f` on a pool sized by `QUADSWEEP_THREADS`, or on the current rayon
/// pool when the variable is unset.
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    match thread_cap()? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("building worker pool")?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Splits the tuple space by first index across the current pool. The result
/// is identical to the sequential sweep.
pub fn run_parallel(sweep: &QuadraticSweep<'_>) -> Result<SweepResult> {
    let partial = (0..sweep.num_first())
        .into_par_iter()
        .map(|first| sweep.run_first(first))
        .reduce(Partial::default, Partial::merge);
    Ok(sweep.finish(partial)?)
}

pub fn parallel_sweep(data: &Dataset, k: usize, objective: Objective) -> Result<SweepResult> {
    let sweep = QuadraticSweep::new(data, k, objective)?;
    run_parallel(&sweep)
}

pub fn parallel_sweep_with_lift(data: &Dataset, k: usize, objective: Objective, lift: Lift) -> Result<SweepResult> {
    let sweep = QuadraticSweep::with_lift(data, k, objective, lift)?;
    run_parallel(&sweep)
}
