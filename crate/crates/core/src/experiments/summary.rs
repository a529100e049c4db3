//! Per-cell aggregation of trial records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, OrderStatistics};

use super::sweep::TrialRecord;
use crate::error::{invalid, Result};
use crate::theory::{cycle_mass_exponent, thresholds, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
}

impl Moments {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut data = Data::new(values.to_vec());
        Some(Self {
            mean,
            std,
            q10: data.quantile(0.1),
            median: data.median(),
            q90: data.quantile(0.9),
        })
    }

    pub fn stderr(&self, count: usize) -> f64 {
        self.std / (count as f64).sqrt()
    }
}

/// Theory values joined to a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellTheory {
    pub thresholds: Thresholds,
    /// Exponent `c(2)` of the expected number of augmenting pairs.
    pub c2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub d: usize,
    pub sigma2: f64,
    pub sigma2_label: Option<f64>,
    pub estimator: String,
    /// Successful trials.
    pub trials: usize,
    pub failures: usize,
    pub error_count: Option<Moments>,
    pub poly_rate: Option<Moments>,
    pub zero_error_fraction: Option<f64>,
    pub mean_m: Option<f64>,
    /// Absent when σ² = 0, where `c(2)` is undefined.
    pub theory: Option<CellTheory>,
}

/// Groups records by cell and estimator, in canonical order.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<CellSummary>> {
    if records.is_empty() {
        return Err(invalid("cannot summarize an empty record set"));
    }
    let mut groups: BTreeMap<(usize, usize, u64, &str), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.n, r.d, r.sigma2.to_bits(), r.estimator.as_str()))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|rows| {
            let first = rows[0];
            let ok: Vec<&TrialRecord> = rows.iter().copied().filter(|r| !r.is_error()).collect();
            let errors: Vec<f64> = ok
                .iter()
                .filter_map(|r| r.error_count)
                .map(|e| e as f64)
                .collect();
            let rates: Vec<f64> = ok.iter().filter_map(|r| r.poly_rate).collect();
            let ms: Vec<f64> = ok.iter().filter_map(|r| r.m).map(|m| m as f64).collect();
            let theory = if first.sigma2 > 0.0 {
                Some(CellTheory {
                    thresholds: thresholds(first.n as u64, first.d as f64)?,
                    c2: cycle_mass_exponent(first.n as u64, first.d as f64, first.sigma2, 2)?,
                })
            } else {
                None
            };
            Ok(CellSummary {
                n: first.n,
                d: first.d,
                sigma2: first.sigma2,
                sigma2_label: first.sigma2_label,
                estimator: first.estimator.clone(),
                trials: ok.len(),
                failures: rows.len() - ok.len(),
                error_count: Moments::of(&errors),
                poly_rate: Moments::of(&rates),
                zero_error_fraction: (!errors.is_empty()).then(|| {
                    errors.iter().filter(|&&e| e == 0.0).count() as f64 / errors.len() as f64
                }),
                mean_m: (!ms.is_empty()).then(|| ms.iter().sum::<f64>() / ms.len() as f64),
                theory,
            })
        })
        .collect()
}

pub fn write_summary_json<W: std::io::Write>(summary: &[CellSummary], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, summary)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: usize, sigma2: f64, trial: usize, errors: Option<usize>) -> TrialRecord {
        TrialRecord {
            n,
            d: 2,
            sigma2,
            sigma2_label: None,
            estimator: "mle".into(),
            trial,
            seed: trial as u64,
            error_count: errors,
            poly_rate: errors.map(|e| crate::model::poly_rate(e, n)),
            m: None,
            wall_time: 0.0,
            error: errors.is_none().then(|| "failed".to_string()),
        }
    }

    #[test]
    fn single_record_has_zero_spread() {
        let s = summarize(&[rec(10, 0.1, 0, Some(4))]).unwrap();
        let e = s[0].error_count.unwrap();
        assert_eq!((e.mean, e.std, e.median), (4.0, 0.0, 4.0));
        assert_eq!(s[0].zero_error_fraction, Some(0.0));
        assert!(summarize(&[]).is_err());
    }

    #[test]
    fn groups_and_counts_failures() {
        let recs = vec![
            rec(10, 0.1, 0, Some(0)),
            rec(10, 0.1, 1, Some(2)),
            rec(10, 0.1, 2, None),
            rec(20, 0.1, 0, Some(0)),
        ];
        let s = summarize(&recs).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].trials, s[0].failures), (2, 1));
        assert_eq!(s[0].zero_error_fraction, Some(0.5));
        assert!((s[0].error_count.unwrap().std - 2f64.sqrt()).abs() < 1e-12);
        let th = s[1].theory.unwrap();
        assert!((th.thresholds.perfect - 1.0 / (400.0 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn summary_json_round_trips() {
        let s = summarize(&[rec(10, 0.1, 0, Some(3)), rec(10, 0.1, 1, Some(1))]).unwrap();
        let mut buf = Vec::new();
        write_summary_json(&s, &mut buf).unwrap();
        let back: Vec<CellSummary> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, s);
    }
}
