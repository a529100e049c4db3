//! Sweep configuration and its expansion into cells.

use serde::{Deserialize, Serialize};

use super::estimators::estimator_by_name;
use crate::error::{invalid, Result};
use crate::model::PlantedMode;
use crate::theory::thresholds;

/// How the dimension depends on `n`. Non-constant rules round to the
/// nearest integer and never go below 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DRule {
    Constant {
        d: usize,
    },
    /// `d = a·ln n`.
    LogRatio {
        a: f64,
    },
    /// `d = c·ln n·ln ln n`, growing faster than any fixed multiple of `ln n`.
    SuperLog {
        c: f64,
    },
}

impl DRule {
    pub fn dimension(&self, n: usize) -> Result<usize> {
        let ln = (n as f64).ln();
        let raw = match *self {
            DRule::Constant { d } => {
                return if d >= 1 {
                    Ok(d)
                } else {
                    Err(invalid("d must be >= 1"))
                }
            }
            DRule::LogRatio { a } => a * ln,
            DRule::SuperLog { c } => c * ln * ln.ln(),
        };
        if !(raw.is_finite() && raw > 0.0) {
            return Err(invalid(format!(
                "dimension rule {self:?} gives {raw} at n={n}"
            )));
        }
        Ok((raw.round() as usize).max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    Perfect,
    StrongConjectured,
    GreedyThird,
}

/// Noise levels per `(n, d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Sigma2Rule {
    Values {
        values: Vec<f64>,
    },
    /// Multiples of a threshold evaluated at each cell's `(n, d)`.
    ThresholdMultiples {
        threshold: ThresholdKind,
        multipliers: Vec<f64>,
    },
    /// `σ² = n^{-ξ/d}` for each `ξ`.
    NExponent {
        xis: Vec<f64>,
    },
}

impl Sigma2Rule {
    /// `(label, σ²)` pairs; the label is the multiplier or exponent when
    /// the rule has one.
    pub fn values(&self, n: usize, d: usize) -> Result<Vec<(Option<f64>, f64)>> {
        let out: Vec<(Option<f64>, f64)> = match self {
            Sigma2Rule::Values { values } => values.iter().map(|&v| (None, v)).collect(),
            Sigma2Rule::ThresholdMultiples {
                threshold,
                multipliers,
            } => {
                let th = thresholds(n as u64, d as f64)?;
                let base = match threshold {
                    ThresholdKind::Perfect => th.perfect,
                    ThresholdKind::StrongConjectured => th.strong_conjectured,
                    ThresholdKind::GreedyThird => th.greedy_third,
                };
                multipliers.iter().map(|&m| (Some(m), m * base)).collect()
            }
            Sigma2Rule::NExponent { xis } => xis
                .iter()
                .map(|&xi| (Some(xi), (n as f64).powf(-xi / d as f64)))
                .collect(),
        };
        if out.is_empty() {
            return Err(invalid("sigma2 rule yields no values"));
        }
        if let Some((_, v)) = out.iter().find(|(_, v)| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid(format!("sigma2 must be finite and >= 0, got {v}")));
        }
        Ok(out)
    }
}

fn default_estimators() -> Vec<String> {
    vec!["mle".to_string()]
}

fn default_planted() -> PlantedMode {
    PlantedMode::Identity
}

fn default_true() -> bool {
    true
}

/// JSON-loadable sweep description. Omitted optional fields take the
/// defaults shown by `SweepConfig::example`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub ns: Vec<usize>,
    pub d_rule: DRule,
    pub sigma2: Sigma2Rule,
    pub trials: usize,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_planted")]
    pub planted: PlantedMode,
    /// Reuse trial seeds across the σ² values of an `(n, d)` pair so that
    /// neighbouring noise levels see the same points and noise directions.
    #[serde(default = "default_true")]
    pub paired_sigma2: bool,
}

/// One `(n, d, σ²)` point of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub d: usize,
    pub sigma2: f64,
    pub sigma2_label: Option<f64>,
}

impl SweepConfig {
    pub fn example() -> Self {
        Self {
            description: None,
            ns: vec![50, 100],
            d_rule: DRule::Constant { d: 2 },
            sigma2: Sigma2Rule::ThresholdMultiples {
                threshold: ThresholdKind::Perfect,
                multipliers: vec![0.5, 1.0, 4.0],
            },
            trials: 10,
            estimators: vec!["mle".into(), "aug_matching_lower_bound".into()],
            seed: 1,
            planted: PlantedMode::Identity,
            paired_sigma2: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(invalid("ns must be non-empty"));
        }
        if let Some(n) = self.ns.iter().find(|&&n| n < 2) {
            return Err(invalid(format!("every n must be >= 2, got {n}")));
        }
        if self.trials < 1 {
            return Err(invalid("trials must be >= 1"));
        }
        if self.estimators.is_empty() {
            return Err(invalid("at least one estimator is required"));
        }
        for e in &self.estimators {
            estimator_by_name(e)?;
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.estimators {
            if !seen.insert(e) {
                return Err(invalid(format!("estimator '{e}' listed twice")));
            }
        }
        self.cells().map(|_| ())
    }

    /// Cells in canonical order; duplicate `(n, d, σ²)` points are rejected.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let mut cells = Vec::new();
        for &n in &self.ns {
            let d = self.d_rule.dimension(n)?;
            for (sigma2_label, sigma2) in self.sigma2.values(n, d)? {
                cells.push(Cell {
                    n,
                    d,
                    sigma2,
                    sigma2_label,
                });
            }
        }
        cells.sort_by(|a, b| {
            (a.n, a.d)
                .cmp(&(b.n, b.d))
                .then(a.sigma2.total_cmp(&b.sigma2))
        });
        if let Some(w) = cells.windows(2).find(|w| {
            (w[0].n, w[0].d, w[0].sigma2.to_bits()) == (w[1].n, w[1].d, w[1].sigma2.to_bits())
        }) {
            return Err(invalid(format!(
                "duplicate cell n={} d={} sigma2={}",
                w[0].n, w[0].d, w[0].sigma2
            )));
        }
        Ok(cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_rules() {
        assert_eq!(DRule::Constant { d: 3 }.dimension(1000).unwrap(), 3);
        assert_eq!(DRule::LogRatio { a: 4.0 }.dimension(2000).unwrap(), 30);
        assert!(DRule::Constant { d: 0 }.dimension(10).is_err());
        let super_log = DRule::SuperLog { c: 1.0 };
        assert_eq!(
            super_log.dimension(1000).unwrap(),
            (1000f64.ln() * 1000f64.ln().ln()).round() as usize
        );
    }

    #[test]
    fn threshold_multiples_scale_the_threshold() {
        let rule = Sigma2Rule::ThresholdMultiples {
            threshold: ThresholdKind::Perfect,
            multipliers: vec![0.25, 1.0],
        };
        let v = rule.values(400, 2).unwrap();
        let perfect = 1.0 / (400f64.powi(2) - 1.0);
        assert!((v[0].1 - 0.25 * perfect).abs() < 1e-18);
        assert_eq!(v[1].0, Some(1.0));
        let xi = Sigma2Rule::NExponent { xis: vec![3.0] }
            .values(400, 2)
            .unwrap();
        assert!((xi[0].1 - 400f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let cfg = SweepConfig::example();
        cfg.validate().unwrap();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert_eq!(SweepConfig::from_json(&text).unwrap(), cfg);
        let mut bad = cfg.clone();
        bad.estimators = vec!["oracle".into()];
        assert!(bad.validate().is_err());
        let mut dup = cfg.clone();
        dup.ns = vec![50, 50];
        assert!(dup.validate().is_err());
        let mut empty = cfg;
        empty.ns.clear();
        assert!(empty.validate().is_err());
        assert!(SweepConfig::from_json(r#"{"ns":[10],"d_rule":{"rule":"constant","d":2},"sigma2":{"rule":"values","values":[0.1]},"trials":1,"bogus":1}"#).is_err());
    }

    #[test]
    fn defaults_fill_optional_fields() {
        let cfg = SweepConfig::from_json(
            r#"{"ns":[10],"d_rule":{"rule":"constant","d":2},"sigma2":{"rule":"values","values":[0.1]},"trials":1}"#,
        )
        .unwrap();
        assert_eq!(cfg.estimators, vec!["mle"]);
        assert!(cfg.paired_sigma2);
        assert_eq!(cfg.planted, PlantedMode::Identity);
    }
}
