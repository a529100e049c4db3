//! Monte Carlo sweeps over `(n, d, σ²)` grids.

mod config;
mod curve;
mod estimators;
mod summary;
mod sweep;

pub use config::{Cell, DRule, Sigma2Rule, SweepConfig, ThresholdKind};
pub use curve::{error_rate_curve, CurvePoint};
pub use estimators::{
    estimator_by_name, AugMatchingLowerBound, Estimator, EstimatorOutput, Greedy, Mle,
    TrialContext, ESTIMATOR_NAMES,
};
pub use summary::{summarize, write_summary_json, CellSummary, CellTheory, Moments};
pub use sweep::{
    read_records_csv, run_sweep, run_sweep_streaming, trial_seed, write_records_csv, TrialRecord,
    CSV_SCHEMA_LINE, THREADS_ENV,
};
