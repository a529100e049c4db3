//! Polynomial error rate against σ² in the `d = a·ln n` regime.

use serde::{Deserialize, Serialize};

use super::config::{DRule, Sigma2Rule, SweepConfig};
use super::summary::summarize;
use super::sweep::run_sweep;
use crate::error::{invalid, Result};
use crate::model::PlantedMode;
use crate::theory::{log_regime_rate, two_cycle_rate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub d: usize,
    pub sigma2: f64,
    /// `d / ln n` after rounding `d`; predictions use this value.
    pub a_effective: f64,
    pub trials: usize,
    pub mean_poly_rate: f64,
    pub stderr: f64,
    /// Limiting rate; `None` above the sublinear window.
    pub predicted: Option<f64>,
    /// Rate implied by augmenting pairs alone.
    pub two_cycle: f64,
}

pub fn error_rate_curve(
    a: f64,
    sigma2s: &[f64],
    ns: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid(format!("a must be positive, got {a}")));
    }
    if let Some(s) = sigma2s.iter().find(|&&s| !(s > 0.0)) {
        return Err(invalid(format!("sigma2 values must be positive, got {s}")));
    }
    let cfg = SweepConfig {
        description: None,
        ns: ns.to_vec(),
        d_rule: DRule::LogRatio { a },
        sigma2: Sigma2Rule::Values {
            values: sigma2s.to_vec(),
        },
        trials,
        estimators: vec!["mle".into()],
        seed,
        planted: PlantedMode::Identity,
        paired_sigma2: true,
    };
    let records = run_sweep(&cfg)?;
    if let Some(r) = records.iter().find(|r| r.is_error()) {
        return Err(invalid(format!(
            "trial {} at n={} sigma2={} failed: {}",
            r.trial,
            r.n,
            r.sigma2,
            r.error.as_deref().unwrap_or("")
        )));
    }
    summarize(&records)?
        .into_iter()
        .map(|s| {
            let rate = s.poly_rate.expect("no failed trials");
            let a_effective = s.d as f64 / (s.n as f64).ln();
            Ok(CurvePoint {
                n: s.n,
                d: s.d,
                sigma2: s.sigma2,
                a_effective,
                trials: s.trials,
                mean_poly_rate: rate.mean,
                stderr: rate.stderr(s.trials),
                predicted: log_regime_rate(a_effective, s.sigma2)?,
                two_cycle: two_cycle_rate(a_effective, s.sigma2),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{log_regime_edge_rate, Thresholds};

    #[test]
    fn prediction_vanishes_at_the_lower_edge() {
        let a = 4.0;
        let lower = 1.0 / ((4.0 / a as f64).exp() - 1.0);
        assert!(log_regime_rate(a, lower).unwrap().unwrap().abs() < 1e-12);
        let upper = 1.0 / ((2.0 * (1.0f64 / a).exp() - 1.0).powi(2) - 1.0);
        assert!((upper - Thresholds::from_ratio(a).unwrap().strong_conjectured).abs() < 1e-12);
        let just_below = upper * (1.0 - 1e-9);
        let rate = log_regime_rate(a, just_below).unwrap().unwrap();
        assert!((rate - log_regime_edge_rate(a)).abs() < 1e-6);
        assert!((rate - (2.0 - 4.0 * (2.0 * 0.25f64.exp() - 1.0).ln())).abs() < 1e-6);
    }

    #[test]
    fn small_curve_has_one_point_per_cell() {
        let pts = error_rate_curve(4.0, &[0.3, 0.5], &[60, 80], 3, 2).unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert_eq!(p.d, (4.0 * (p.n as f64).ln()).round() as usize);
            assert!((0.0..=1.0).contains(&p.mean_poly_rate));
            assert!(p.two_cycle <= 1.0);
        }
        assert!(error_rate_curve(0.0, &[0.3], &[60], 3, 2).is_err());
    }
}
