//! Online tracking of Brownian particles by repeated maximum-likelihood
//! matching between consecutive snapshots.
//!
//! Particles start at independent standard Gaussian positions and move by
//! `N(0, δ I_d)` between snapshots. Each snapshot is observed in a random
//! order; the per-step estimate `π̂_k` is expressed in true particle labels
//! (`π̂_k(i) = j` means particle `i` at step `k-1` was matched to particle
//! `j` at step `k`), and the running composition applies `π̂_1` first.

use std::io::Write;

use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lap::{solve_assignment, Direction};
use crate::model::{CostMatrices, Permutation};
use crate::rng::{derive_seed, rng_from_seed, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingOptions {
    /// Divide each snapshot by its own empirical standard deviation before
    /// matching.
    pub rescale: bool,
    /// Multiply every snapshot by this factor before matching.
    pub position_scale: f64,
}

impl Default for TrackingOptions {
    fn default() -> Self {
        Self {
            rescale: false,
            position_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackingRun {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub k: usize,
    pub seed: u64,
    pub options: TrackingOptions,
    /// `steps[k-1] = π̂_k`.
    pub steps: Vec<Permutation>,
    /// `composed[k] = π̂_k ∘ ... ∘ π̂_1`; `composed[0]` is the identity.
    pub composed: Vec<Permutation>,
    /// Fixed points of `composed[k]`.
    pub fixed_points: Vec<usize>,
    /// Particles mismatched by `π̂_k` alone.
    pub step_errors: Vec<usize>,
    /// Mean squared displacement per particle over each step.
    pub mean_sq_displacement: Vec<f64>,
}

fn validate(n: usize, d: usize, delta: f64) -> Result<()> {
    if n < 2 || d < 1 {
        return Err(invalid(format!("need n >= 2 and d >= 1, got n={n} d={d}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid(format!(
            "delta must be finite and > 0, got {delta}"
        )));
    }
    Ok(())
}

fn empirical_std(x: &Array2<f64>) -> f64 {
    let (n, d) = x.dim();
    let mean = x.mean_axis(ndarray::Axis(0)).expect("non-empty snapshot");
    let ss: f64 = x
        .rows()
        .into_iter()
        .map(|r| {
            r.iter()
                .zip(mean.iter())
                .map(|(a, m)| (a - m) * (a - m))
                .sum::<f64>()
        })
        .sum();
    (ss / (n * d) as f64).sqrt()
}

/// Sequential simulation state for one trial.
struct Tracker {
    d: usize,
    sqrt_delta: f64,
    options: TrackingOptions,
    rng: SimRng,
    positions: Array2<f64>,
    composed: Permutation,
}

struct Step {
    estimate: Permutation,
    mean_sq_displacement: f64,
}

impl Tracker {
    fn new(n: usize, d: usize, delta: f64, seed: u64, options: TrackingOptions) -> Self {
        let mut rng = rng_from_seed(seed);
        let positions =
            Array2::from_shape_simple_fn((n, d), || rng.sample::<f64, _>(StandardNormal));
        Self {
            d,
            sqrt_delta: delta.sqrt(),
            options,
            rng,
            positions,
            composed: Permutation::identity(n),
        }
    }

    fn view(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut s = self.options.position_scale;
        if self.options.rescale {
            s /= empirical_std(x);
        }
        x * s
    }

    fn step(&mut self) -> Result<Step> {
        let n = self.positions.nrows();
        let step = Array2::from_shape_simple_fn((n, self.d), || {
            self.sqrt_delta * self.rng.sample::<f64, _>(StandardNormal)
        });
        let next = &self.positions + &step;
        let shown = Permutation::random(n, &mut self.rng);
        let mut observed = Array2::zeros((n, self.d));
        for i in 0..n {
            observed.row_mut(shown.apply(i)).assign(&next.row(i));
        }
        let costs = CostMatrices::from_points(
            self.view(&self.positions).view(),
            self.view(&observed).view(),
        )?;
        let sol = solve_assignment(costs.w0.view(), Direction::Minimize)?;
        let estimate = shown.inverse().after(&sol.assignment);
        self.composed = estimate.after(&self.composed);
        self.positions = next;
        Ok(Step {
            estimate,
            mean_sq_displacement: step.iter().map(|v| v * v).sum::<f64>() / n as f64,
        })
    }
}

pub fn simulate_tracking(
    n: usize,
    d: usize,
    delta: f64,
    k: usize,
    seed: u64,
) -> Result<TrackingRun> {
    simulate_tracking_with(n, d, delta, k, seed, TrackingOptions::default())
}

/// `k = 0` is accepted and yields the identity baseline.
pub fn simulate_tracking_with(
    n: usize,
    d: usize,
    delta: f64,
    k: usize,
    seed: u64,
    options: TrackingOptions,
) -> Result<TrackingRun> {
    validate(n, d, delta)?;
    if !(options.position_scale > 0.0 && options.position_scale.is_finite()) {
        return Err(invalid("position_scale must be finite and > 0"));
    }
    let mut tracker = Tracker::new(n, d, delta, seed, options);
    let mut run = TrackingRun {
        n,
        d,
        delta,
        k,
        seed,
        options,
        steps: Vec::with_capacity(k),
        composed: vec![Permutation::identity(n)],
        fixed_points: vec![n],
        step_errors: Vec::with_capacity(k),
        mean_sq_displacement: Vec::with_capacity(k),
    };
    for _ in 0..k {
        let s = tracker.step()?;
        run.step_errors.push(n - s.estimate.fixed_points());
        run.fixed_points.push(tracker.composed.fixed_points());
        run.composed.push(tracker.composed.clone());
        run.steps.push(s.estimate);
        run.mean_sq_displacement.push(s.mean_sq_displacement);
    }
    Ok(run)
}

/// Per-step rows `step,fixed_points,step_errors`, starting from step 0.
pub fn write_tracking_csv<W: Write>(run: &TrackingRun, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["step", "fixed_points", "step_errors"])?;
    for (k, fp) in run.fixed_points.iter().enumerate() {
        let errors = if k == 0 { 0 } else { run.step_errors[k - 1] };
        out.write_record([k.to_string(), fp.to_string(), errors.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub const MIN_TMAX_TRIALS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmaxEstimate {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub k_cap: usize,
    /// Mean of `δ K` over trials that crossed below `n/2` fixed points.
    pub mean: f64,
    pub stderr: f64,
    /// Mean of `δ K` with censored trials counted at `δ k_cap`; a lower
    /// bound on the uncensored mean.
    pub restricted_mean: f64,
    /// Trials that never crossed within `k_cap` steps.
    pub censored_fraction: f64,
    /// First crossing step per trial, `None` when censored.
    pub crossings: Vec<Option<usize>>,
}

/// First `K` at which the composition has fewer than `n/2` fixed points.
fn first_crossing(
    n: usize,
    d: usize,
    delta: f64,
    k_cap: usize,
    seed: u64,
    options: TrackingOptions,
) -> Result<Option<usize>> {
    let mut tracker = Tracker::new(n, d, delta, seed, options);
    for k in 1..=k_cap {
        tracker.step()?;
        if 2 * tracker.composed.fixed_points() < n {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn estimate_tmax(
    n: usize,
    d: usize,
    delta: f64,
    trials: usize,
    k_cap: usize,
    seed: u64,
) -> Result<TmaxEstimate> {
    estimate_tmax_with(n, d, delta, trials, k_cap, seed, TrackingOptions::default())
}

/// Trial `t` uses seed `derive_seed(seed, [t])`, so estimates at different
/// `δ` with the same `seed` share initial positions and unit increments.
pub fn estimate_tmax_with(
    n: usize,
    d: usize,
    delta: f64,
    trials: usize,
    k_cap: usize,
    seed: u64,
    options: TrackingOptions,
) -> Result<TmaxEstimate> {
    validate(n, d, delta)?;
    if trials < MIN_TMAX_TRIALS {
        return Err(invalid(format!(
            "need at least {MIN_TMAX_TRIALS} trials, got {trials}"
        )));
    }
    if k_cap < 1 {
        return Err(invalid("k_cap must be >= 1"));
    }
    let crossings = (0..trials)
        .into_par_iter()
        .map(|t| first_crossing(n, d, delta, k_cap, derive_seed(seed, &[t as u64]), options))
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = crossings
        .iter()
        .flatten()
        .map(|&k| k as f64 * delta)
        .collect();
    let m = times.len() as f64;
    let mean = if times.is_empty() {
        f64::NAN
    } else {
        times.iter().sum::<f64>() / m
    };
    let stderr = if times.len() < 2 {
        f64::NAN
    } else {
        let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    };
    let capped = crossings
        .iter()
        .map(|c| c.unwrap_or(k_cap) as f64 * delta)
        .sum::<f64>()
        / trials as f64;
    Ok(TmaxEstimate {
        n,
        d,
        delta,
        k_cap,
        mean,
        stderr,
        restricted_mean: capped,
        censored_fraction: (trials - times.len()) as f64 / trials as f64,
        crossings,
    })
}

/// Least-squares fit of `ln T = a + b ln δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the exponent; NaN with fewer than three points.
    pub exponent_stderr: f64,
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerFit> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(invalid(
            "need at least two points with positive coordinates",
        ));
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(invalid("need at least two distinct x values"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let exponent_stderr = if points.len() > 2 {
        let rss: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - a - b * x).powi(2))
            .sum();
        (rss / (m - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(PowerFit {
        exponent: b,
        intercept: a,
        exponent_stderr,
    })
}

/// One `T_max`-versus-`δ` series at fixed dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TmaxSeries {
    pub d: usize,
    pub deltas: Vec<f64>,
    /// Overrides the recipe-wide step cap.
    #[serde(default)]
    pub k_cap: Option<usize>,
}

/// A set of series sharing `n`, trial count and seed, so that every point
/// uses the same paired trial seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackingRecipe {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub n: usize,
    pub trials: usize,
    pub k_cap: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rescale: bool,
    pub series: Vec<TmaxSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub d: usize,
    pub estimates: Vec<TmaxEstimate>,
    /// Fit of the restricted means against `δ`; absent with fewer than two
    /// usable points.
    pub fit: Option<PowerFit>,
}

pub fn run_tracking_recipe(recipe: &TrackingRecipe) -> Result<Vec<SeriesResult>> {
    if recipe.series.is_empty() {
        return Err(invalid("tracking recipe has no series"));
    }
    let options = TrackingOptions {
        rescale: recipe.rescale,
        ..TrackingOptions::default()
    };
    recipe
        .series
        .iter()
        .map(|s| {
            let k_cap = s.k_cap.unwrap_or(recipe.k_cap);
            let estimates = s
                .deltas
                .iter()
                .map(|&delta| {
                    estimate_tmax_with(
                        recipe.n,
                        s.d,
                        delta,
                        recipe.trials,
                        k_cap,
                        recipe.seed,
                        options,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let points: Vec<(f64, f64)> = estimates
                .iter()
                .map(|e| (e.delta, e.restricted_mean))
                .collect();
            Ok(SeriesResult {
                d: s.d,
                fit: fit_power_law(&points).ok(),
                estimates,
            })
        })
        .collect()
}
