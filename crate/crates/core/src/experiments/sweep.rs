//! Parallel execution of a sweep and the trial-record CSV format.

use std::io::{Read, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Cell, SweepConfig};
use super::estimators::{estimator_by_name, Estimator, TrialContext};
use crate::error::{invalid, Result};
use crate::model::{poly_rate, InstanceSpec};
use crate::rng::derive_seed;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "PLANTED_THREADS";

/// First line of every trial CSV.
pub const CSV_SCHEMA_LINE: &str = "# schema=planted-sweep-trials/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub d: usize,
    pub sigma2: f64,
    pub sigma2_label: Option<f64>,
    pub estimator: String,
    pub trial: usize,
    pub seed: u64,
    /// `None` on error rows.
    pub error_count: Option<usize>,
    pub poly_rate: Option<f64>,
    pub m: Option<usize>,
    /// Seconds spent in the estimator; not written to CSV.
    #[serde(skip)]
    pub wall_time: f64,
    /// Failure message; the row is an error row when set.
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }

    fn sort_key(&self) -> (usize, usize, u64, &str, usize) {
        // σ² is non-negative, so its bit pattern orders like the value.
        (
            self.n,
            self.d,
            self.sigma2.to_bits(),
            self.estimator.as_str(),
            self.trial,
        )
    }
}

/// Seed of trial `trial` in `cell`. With pairing the σ² value is left out.
pub fn trial_seed(cfg: &SweepConfig, cell: &Cell, trial: usize) -> u64 {
    let mut labels = vec![cell.n as u64, cell.d as u64, trial as u64];
    if !cfg.paired_sigma2 {
        labels.push(cell.sigma2.to_bits());
    }
    derive_seed(cfg.seed, &labels)
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic with non-string payload".to_string())
}

fn run_trial(
    cfg: &SweepConfig,
    estimators: &[Box<dyn Estimator>],
    cell: &Cell,
    trial: usize,
) -> Vec<TrialRecord> {
    let seed = trial_seed(cfg, cell, trial);
    let base = |name: &str| TrialRecord {
        n: cell.n,
        d: cell.d,
        sigma2: cell.sigma2,
        sigma2_label: cell.sigma2_label,
        estimator: name.to_string(),
        trial,
        seed,
        error_count: None,
        poly_rate: None,
        m: None,
        wall_time: 0.0,
        error: None,
    };
    let inst = catch_unwind(|| {
        InstanceSpec::new(cell.n, cell.d, cell.sigma2, seed)
            .with_planted(cfg.planted)
            .generate()
    });
    let inst = match inst {
        Ok(Ok(inst)) => inst,
        failure => {
            let msg = match failure {
                Ok(Err(e)) => e.to_string(),
                Err(p) => panic_message(p),
                Ok(Ok(_)) => unreachable!(),
            };
            return estimators
                .iter()
                .map(|e| TrialRecord {
                    error: Some(msg.clone()),
                    ..base(e.name())
                })
                .collect();
        }
    };
    let ctx = TrialContext::new(&inst);
    estimators
        .iter()
        .map(|est| {
            let start = Instant::now();
            let out = catch_unwind(AssertUnwindSafe(|| est.run(&ctx)));
            let wall_time = start.elapsed().as_secs_f64();
            let mut rec = TrialRecord {
                wall_time,
                ..base(est.name())
            };
            match out {
                Ok(Ok(o)) => {
                    rec.error_count = Some(o.error_count);
                    rec.poly_rate = Some(poly_rate(o.error_count, cell.n));
                    rec.m = o.m;
                }
                Ok(Err(e)) => rec.error = Some(e.to_string()),
                Err(p) => rec.error = Some(panic_message(p)),
            }
            rec
        })
        .collect()
}

fn thread_override() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(invalid(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

/// Runs every cell and trial. `sink` sees each record as it completes, in
/// scheduling order; the returned records are canonically sorted. Trial
/// failures become error rows.
pub fn run_sweep_streaming<F>(cfg: &SweepConfig, sink: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(&TrialRecord) + Sync,
{
    cfg.validate()?;
    let estimators = cfg
        .estimators
        .iter()
        .map(|e| estimator_by_name(e))
        .collect::<Result<Vec<_>>>()?;
    let cells = cfg.cells()?;
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let work = || {
        tasks
            .par_iter()
            .flat_map_iter(|&(c, t)| {
                let recs = run_trial(cfg, &estimators, &cells[c], t);
                recs.iter().for_each(&sink);
                recs
            })
            .collect::<Vec<_>>()
    };
    let mut records = match thread_override()? {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| invalid(format!("cannot build thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(records)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    run_sweep_streaming(cfg, |_| {})
}

/// Writes the schema line, a header and one row per record.
pub fn write_records_csv<W: Write>(records: &[TrialRecord], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_SCHEMA_LINE}")?;
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    if records.is_empty() {
        out.write_record([
            "n",
            "d",
            "sigma2",
            "sigma2_label",
            "estimator",
            "trial",
            "seed",
            "error_count",
            "poly_rate",
            "m",
            "error",
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(r: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        let rec: TrialRecord = rec?;
        out.push(rec);
    }
    Ok(out)
}
