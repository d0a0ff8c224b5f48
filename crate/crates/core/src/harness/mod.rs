//! Seeded experiment sweeps over `(n, s, m)`, error-decay fits and
//! assumption reports.

mod assumptions;
mod config;
mod scaling;
mod sweep;

pub use assumptions::{moments_auto, report_assumptions, AssumptionReport};
pub use config::{ExperimentConfig, OutputPaths, SignalFamily, SweepSolver};
pub use scaling::{fit_log_log, report_scaling, ScalingFit, BOOTSTRAP_RESAMPLES};
pub use sweep::{median, run_sweep, SweepResult, SweepRow, TrialSummary, SWEEP_KEY_COLUMNS};
