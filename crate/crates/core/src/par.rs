//! Execution modes for batch work.
//!
//! Independent analyses — one machine each — fan out over a thread pool when
//! the `parallel` feature is enabled and [`ExecMode::Parallel`] is selected.
//! [`ExecMode::Sequential`] forces single-threaded execution at runtime, and
//! builds without the feature compile the same call sites down to the
//! sequential path, so results are identical in every configuration: batches
//! are mapped in input order and every analysis is deterministic.

use crate::analysis::{analyze_length, AnalysisOptions};
use crate::growth::GrowthExponent;
use crate::model::CounterVass;

/// Thread usage for batch helpers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    /// Single-threaded, in input order.
    Sequential,
    /// Fan out over the global thread pool (with the `parallel` feature;
    /// otherwise equivalent to [`ExecMode::Sequential`]).
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn par_map<T, R, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}

/// Computes the termination-length growth of each machine in a batch.
///
/// This is the fan-out entry point used by the benchmark suite and the
/// batch CLI path; each machine gets an independent full analysis.
pub fn batch_length_growth(
    machines: &[CounterVass],
    opts: &AnalysisOptions,
    mode: ExecMode,
) -> Vec<GrowthExponent> {
    par_map(mode, machines.iter().collect(), |m| {
        let analysis = analyze_length(m, 1, opts);
        analysis.table.max_exponent(analysis.step_counter)
    })
}
