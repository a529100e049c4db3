//! Monte Carlo estimates of the probability that a fixed pair is an edge
//! of `G^aug`, reported both raw (`p`) and normalized by the first-moment
//! bound (`p̂ = p / exp(-(d/2) S(σ², 2))`).
//!
//! Every sampler returns unbiased samples of `p̂` directly. The scalar and
//! two-point samplers use exponential tilting so that rare edges at large
//! `d` or small `σ²` are still resolved with a bounded number of draws.

use ndarray::{array, Array1};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::is_augmenting;
use crate::error::{invalid, Error, Result};
use crate::rng::{derive_seed, rng_from_seed, SimRng};
use crate::special::scaled_normal_sf;

pub const MIN_EDGE_TRIALS: usize = 10_000;
const BLOCK: usize = 8192;

/// A sampler of `p̂`.
pub trait EdgeProbSampler: Send + Sync {
    fn name(&self) -> &'static str;

    fn sample(&self, d: usize, sigma2: f64, rng: &mut SimRng) -> f64;
}

/// One-dimensional representation `p = P[g >= √u]`, `g ~ N(0, σ²)`,
/// `u ~ χ²(d)`, with `u` drawn from the tilted law `Gamma(d/2, 2σ²/(1+σ²))`
/// and the Gaussian tail evaluated exactly.
pub struct ScalarSampler;

/// Direct simulation of `x_1, x_2, z_1, z_2` and the transposition test on
/// the resulting 2x2 weight matrix, with the separation and noise
/// difference drawn from shifted laws and reweighted.
pub struct TwoPointSampler;

/// Plain indicator of `g >= √u` without reweighting.
pub struct NaiveSampler;

pub const SAMPLER_NAMES: &[&str] = &["scalar", "two_point", "naive"];

pub fn sampler_by_name(name: &str) -> Result<Box<dyn EdgeProbSampler>> {
    match name {
        "scalar" => Ok(Box::new(ScalarSampler)),
        "two_point" => Ok(Box::new(TwoPointSampler)),
        "naive" => Ok(Box::new(NaiveSampler)),
        _ => Err(Error::UnknownStrategy {
            kind: "edge probability sampler",
            name: name.to_string(),
            known: SAMPLER_NAMES.join(", "),
        }),
    }
}

/// `ln(1 + 1/σ²) = S(σ², 2)`.
fn s2(sigma2: f64) -> f64 {
    (1.0 / sigma2).ln_1p()
}

impl EdgeProbSampler for ScalarSampler {
    fn name(&self) -> &'static str {
        "scalar"
    }

    fn sample(&self, d: usize, sigma2: f64, rng: &mut SimRng) -> f64 {
        let tau2 = sigma2 / (1.0 + sigma2);
        let gamma = Gamma::new(0.5 * d as f64, 2.0 * tau2).expect("positive parameters");
        let u: f64 = gamma.sample(rng);
        scaled_normal_sf((u / sigma2).sqrt())
    }
}

fn gaussian_vec(d: usize, scale: f64, rng: &mut SimRng) -> Array1<f64> {
    Array1::from_shape_simple_fn(d, || scale * rng.sample::<f64, _>(StandardNormal))
}

impl EdgeProbSampler for TwoPointSampler {
    fn name(&self) -> &'static str {
        "two_point"
    }

    fn sample(&self, d: usize, sigma2: f64, rng: &mut SimRng) -> f64 {
        let sigma = sigma2.sqrt();
        let tau = (sigma2 / (1.0 + sigma2)).sqrt();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // x_1 = (s_x - δ)/√2, x_2 = (s_x + δ)/√2 with δ ~ N(0, τ² I) instead of N(0, I).
        let s_x = gaussian_vec(d, 1.0, rng);
        let delta = gaussian_vec(d, tau, rng);
        // z_1 - z_2 = √2 v with v ~ N(δ, σ² I) instead of N(0, σ² I).
        let s_z = gaussian_vec(d, sigma, rng);
        let v = &gaussian_vec(d, sigma, rng) + &delta;
        let x1 = (&s_x - &delta) * h;
        let x2 = (&s_x + &delta) * h;
        let y1 = &x1 + &((&s_z + &v) * h);
        let y2 = &x2 + &((&s_z - &v) * h);
        let w = array![[x1.dot(&y1), x1.dot(&y2)], [x2.dot(&y1), x2.dot(&y2)]];
        let hit = is_augmenting(w.view(), &[0, 1])
            .expect("2x2 transposition is well formed")
            .is_augmenting();
        if !hit {
            return 0.0;
        }
        ((delta.dot(&delta) - v.dot(&delta)) / sigma2).exp()
    }
}

impl EdgeProbSampler for NaiveSampler {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn sample(&self, d: usize, sigma2: f64, rng: &mut SimRng) -> f64 {
        let chi = ChiSquared::new(d as f64).expect("positive degrees of freedom");
        let u: f64 = chi.sample(rng);
        let g = sigma2.sqrt() * rng.sample::<f64, _>(StandardNormal);
        if g >= u.sqrt() {
            (0.5 * d as f64 * s2(sigma2)).exp()
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeProbEstimate {
    pub sampler: String,
    pub d: usize,
    pub sigma2: f64,
    pub trials: usize,
    pub p: f64,
    pub p_stderr: f64,
    pub phat: f64,
    pub phat_stderr: f64,
}

/// Mean and standard error of `trials` draws of `f`, in fixed blocks with
/// seeds derived from `(seed, block)` and summed in block order.
pub(crate) fn blocked_mean<F>(trials: usize, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&mut SimRng) -> f64 + Sync,
{
    let blocks = trials.div_ceil(BLOCK);
    let sums: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_from_seed(derive_seed(seed, &[b as u64]));
            let count = BLOCK.min(trials - b * BLOCK);
            let mut s = 0.0;
            let mut ss = 0.0;
            for _ in 0..count {
                let v = f(&mut rng);
                s += v;
                ss += v * v;
            }
            (s, ss)
        })
        .collect();
    let (s, ss) = sums
        .iter()
        .fold((0.0, 0.0), |(a, b), &(c, e)| (a + c, b + e));
    let n = trials as f64;
    let mean = s / n;
    let var = ((ss / n - mean * mean) * n / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

pub fn estimate_edge_probability_with(
    sampler: &dyn EdgeProbSampler,
    d: usize,
    sigma2: f64,
    trials: usize,
    seed: u64,
) -> Result<EdgeProbEstimate> {
    if d < 1 || !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(invalid(format!(
            "need d >= 1 and sigma2 > 0, got d={d} sigma2={sigma2}"
        )));
    }
    if trials < MIN_EDGE_TRIALS {
        return Err(invalid(format!(
            "need at least {MIN_EDGE_TRIALS} trials, got {trials}"
        )));
    }
    let (phat, phat_stderr) = blocked_mean(trials, seed, |rng| sampler.sample(d, sigma2, rng));
    let scale = (-0.5 * d as f64 * s2(sigma2)).exp();
    Ok(EdgeProbEstimate {
        sampler: sampler.name().to_string(),
        d,
        sigma2,
        trials,
        p: phat * scale,
        p_stderr: phat_stderr * scale,
        phat,
        phat_stderr,
    })
}

/// Estimate with the scalar sampler.
pub fn estimate_edge_probability(
    d: usize,
    sigma2: f64,
    trials: usize,
    seed: u64,
) -> Result<EdgeProbEstimate> {
    estimate_edge_probability_with(&ScalarSampler, d, sigma2, trials, seed)
}
