//! Improper greedy estimators: each `x_i` independently picks its nearest
//! `y_j` (by distance or by inner product), so a `y` may be used twice.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
use ndarray::{ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{cost_matrices, poly_rate, Instance};
use crate::special::f_ratio_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyVariant {
    Distance,
    InnerProduct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyReport {
    pub variant: GreedyVariant,
    /// `choice[i]` is the `y` index picked for `x_i`.
    pub choice: Vec<usize>,
    pub error_set: Vec<usize>,
    pub error_count: usize,
    pub poly_rate: f64,
    /// Pairs `(i, j)` with `|x_i - y_{π*(i)}|² > |x_i - y_j|²` (distance only).
    pub pair_count: Option<usize>,
    /// `P[A/B < σ²/(2+σ²)]` for independent `A, B ~ χ²(d)` (distance only).
    pub predicted_pair_prob: Option<f64>,
}

impl GreedyReport {
    /// `n(n-1)` times the predicted pair probability.
    pub fn predicted_pair_count(&self) -> Option<f64> {
        let n = self.choice.len() as f64;
        self.predicted_pair_prob.map(|p| n * (n - 1.0) * p)
    }
}

/// Index of the best entry under `better`, ties to the smallest index.
fn best_index(row: ArrayView1<'_, f64>, better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (j, &v) in row.iter().enumerate().skip(1) {
        if better(v, row[best]) {
            best = j;
        }
    }
    best
}

fn report(inst: &Instance, variant: GreedyVariant, choice: Vec<usize>) -> GreedyReport {
    let error_set: Vec<usize> = (0..inst.n())
        .filter(|&i| choice[i] != inst.planted.apply(i))
        .collect();
    GreedyReport {
        variant,
        error_count: error_set.len(),
        poly_rate: poly_rate(error_set.len(), inst.n()),
        error_set,
        choice,
        pair_count: None,
        predicted_pair_prob: None,
    }
}

/// Predicted probability that a fixed wrong `y` is closer than the true one.
pub fn distance_pair_probability(d: usize, sigma2: f64) -> Result<f64> {
    f_ratio_cdf(d as f64, sigma2 / (2.0 + sigma2))
}

pub fn greedy_distance(inst: &Instance) -> Result<GreedyReport> {
    let w0 = cost_matrices(inst).w0;
    let choice: Vec<usize> = w0
        .rows()
        .into_iter()
        .map(|r| best_index(r, |a, b| a < b))
        .collect();
    let pairs = (0..inst.n())
        .map(|i| {
            let own = w0[[i, inst.planted.apply(i)]];
            w0.row(i).iter().filter(|&&v| own > v).count()
        })
        .sum();
    let mut rep = report(inst, GreedyVariant::Distance, choice);
    rep.pair_count = Some(pairs);
    rep.predicted_pair_prob = Some(distance_pair_probability(inst.d(), inst.spec.sigma2)?);
    Ok(rep)
}

pub fn greedy_inner_product(inst: &Instance) -> Result<GreedyReport> {
    let w = cost_matrices(inst).w;
    let choice: Vec<usize> = w
        .rows()
        .into_iter()
        .map(|r| best_index(r, |a, b| a > b))
        .collect();
    Ok(report(inst, GreedyVariant::InnerProduct, choice))
}

pub fn greedy(inst: &Instance, variant: GreedyVariant) -> Result<GreedyReport> {
    match variant {
        GreedyVariant::Distance => greedy_distance(inst),
        GreedyVariant::InnerProduct => greedy_inner_product(inst),
    }
}

/// Largest point count for the hull-vertex test.
pub const HULL_MAX_POINTS: usize = 2000;

/// Whether row `idx` of `points` lies outside the convex hull of the other
/// rows, decided by infeasibility of `Σ λ_j p_j = p_idx`, `λ >= 0`, `Σ λ = 1`.
pub fn is_hull_vertex(points: ArrayView2<'_, f64>, idx: usize) -> Result<bool> {
    let (n, d) = points.dim();
    if idx >= n {
        return Err(invalid(format!("index {idx} out of range for {n} points")));
    }
    if n > HULL_MAX_POINTS {
        return Err(Error::TooLarge {
            what: "hull vertex test (points)",
            limit: HULL_MAX_POINTS,
            got: n,
        });
    }
    if n == 1 {
        return Ok(true);
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..n)
        .filter(|&j| j != idx)
        .map(|j| (j, lp.add_var(0.0, (0.0, f64::INFINITY))))
        .collect();
    let mut sum = LinearExpr::empty();
    for &(_, v) in &vars {
        sum.add(v, 1.0);
    }
    lp.add_constraint(sum, ComparisonOp::Eq, 1.0);
    for k in 0..d {
        let mut e = LinearExpr::empty();
        for &(j, v) in &vars {
            e.add(v, points[[j, k]]);
        }
        lp.add_constraint(e, ComparisonOp::Eq, points[[idx, k]]);
    }
    match lp.solve() {
        Ok(_) => Ok(false),
        Err(minilp::Error::Infeasible) => Ok(true),
        Err(e) => Err(Error::Solver(e.to_string())),
    }
}

/// High-dimensional predictions for the inner-product greedy estimator and
/// the MLE, as multiples of `d / ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreedyAnnotations {
    /// Perfect recovery of the inner-product greedy: `d / (8 ln n)`.
    pub inner_perfect: f64,
    /// Perfect and strong recovery of the MLE: `d / (4 ln n)`.
    pub mle: f64,
    /// Strong recovery of the inner-product greedy: `d / (2 ln n)`.
    pub inner_strong: f64,
}

pub fn greedy_annotations(n: u64, d: f64) -> Result<GreedyAnnotations> {
    if n < 2 || !(d > 0.0) {
        return Err(invalid(format!("need n >= 2 and d > 0, got n={n} d={d}")));
    }
    let h = d / (n as f64).ln();
    Ok(GreedyAnnotations {
        inner_perfect: h / 8.0,
        mle: h / 4.0,
        inner_strong: h / 2.0,
    })
}
