//! Experiment orchestration: configuration, run directories, diagnostics, and plots.
//!
//! Each `cmd_*` function backs one subcommand of the `sepnet` binary and
//! writes CSV artifacts with a header row and fixed column order. Floats are
//! written in shortest round-trip form, so values re-read from disk are
//! bit-identical to the ones computed.

mod config;
mod diagnostics;
mod io;
mod svg;
mod sweep;
mod train;

pub use config::{parse_config, ConflictConfig, CorrelateConfig, RunConfig, SweepConfig, TaskId, KEYS};
pub use diagnostics::{cmd_conflict, cmd_correlate, ConflictReport, ConflictRow, CorrelationReport, CONFLICT_CSV, COS_CSV, JS_CSV};
pub use io::{read_front_csv, write_front_csv, FRONT_HEADER};
pub use svg::{emit_svg_scatter, heatmap, line_plot, Series};
pub use sweep::{cmd_sweep, SweepReport, SweepRow, SWEEP_CSV};
pub use train::{
    build_problem, cmd_eval, cmd_train, eval_front_name, EvalResult, RunRecord, Summary, ABORTED, CHECKPOINT,
    CONFIG_SNAPSHOT, FRONT_TEST, METRICS, PHI_TRACE, PHI_TRACE_HEADER, SUMMARY,
};

use crate::{Error, Result};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "SEPNET_THREADS";

/// Size the global worker pool from `SEPNET_THREADS` (all cores when unset).
/// Returns the number of threads in use.
pub fn configure_threads() -> Result<usize> {
    let requested = match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| Error::ConfigField {
                field: THREADS_ENV.into(),
                message: format!("expected a positive integer, got `{v}`"),
            })?;
            if n == 0 {
                return Err(Error::ConfigField { field: THREADS_ENV.into(), message: "must be at least 1".into() });
            }
            Some(n)
        }
        Err(_) => None,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = requested {
        builder = builder.num_threads(n);
    }
    // A pool built earlier in the process wins; report what is actually running.
    let _ = builder.build_global();
    Ok(rayon::current_num_threads())
}
