use serde::{Deserialize, Serialize};

use super::structure::aligned_weights;
use super::{build_aug_graph, cycle_bound_ln};
use crate::error::{invalid, Result};
use crate::model::{InstanceSpec, PlantedMode};
use crate::rng::derive_seed;

fn aug_graph_sample(
    t: usize,
    d: usize,
    sigma2: f64,
    seed: u64,
    trial: usize,
) -> Result<super::AugGraph> {
    let inst = InstanceSpec::new(t, d, sigma2, derive_seed(seed, &[trial as u64]))
        .with_planted(PlantedMode::Identity)
        .generate()?;
    build_aug_graph(aligned_weights(&inst).view())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphFrequency {
    pub t: usize,
    pub trials: usize,
    pub frequency: f64,
    pub stderr: f64,
    /// `exp(-(d/2) S(σ², t))`.
    pub bound: f64,
}

/// Fraction of `n = t` instances whose `G^aug` contains the path
/// `0 - 1 - ... - (t-1)`.
pub fn path_subgraph_frequency(
    t: usize,
    d: usize,
    sigma2: f64,
    trials: usize,
    seed: u64,
) -> Result<SubgraphFrequency> {
    if t < 2 || trials < 2 {
        return Err(invalid(format!(
            "need t >= 2 and trials >= 2, got t={t} trials={trials}"
        )));
    }
    let mut hits = 0usize;
    for trial in 0..trials {
        let g = aug_graph_sample(t, d, sigma2, seed, trial)?;
        if (1..t).all(|k| g.has_edge(k - 1, k)) {
            hits += 1;
        }
    }
    let f = hits as f64 / trials as f64;
    Ok(SubgraphFrequency {
        t,
        trials,
        frequency: f,
        stderr: (f * (1.0 - f) / (trials - 1) as f64).sqrt(),
        bound: cycle_bound_ln(d as f64, sigma2, t as u32)?.exp(),
    })
}

/// Joint versus marginal frequency of two edges sharing a vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCorrelation {
    pub trials: usize,
    /// Average frequency of `{0,1}` and `{0,2}`.
    pub p_edge: f64,
    /// Frequency of both.
    pub p_joint: f64,
    /// `p_joint / p_edge²`; one under independence.
    pub ratio: f64,
}

pub fn edge_correlation(
    d: usize,
    sigma2: f64,
    trials: usize,
    seed: u64,
) -> Result<EdgeCorrelation> {
    if trials < 2 {
        return Err(invalid("need at least 2 trials"));
    }
    let (mut single, mut joint) = (0usize, 0usize);
    for trial in 0..trials {
        let g = aug_graph_sample(3, d, sigma2, seed, trial)?;
        let (a, b) = (g.has_edge(0, 1), g.has_edge(0, 2));
        single += a as usize + b as usize;
        joint += (a && b) as usize;
    }
    let p_edge = single as f64 / (2 * trials) as f64;
    let p_joint = joint as f64 / trials as f64;
    Ok(EdgeCorrelation {
        trials,
        p_edge,
        p_joint,
        ratio: if p_edge > 0.0 {
            p_joint / (p_edge * p_edge)
        } else {
            f64::NAN
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertex_path_is_the_edge_event() {
        let f = path_subgraph_frequency(2, 2, 0.3, 4000, 1).unwrap();
        assert!(f.frequency <= f.bound + 3.0 * f.stderr);
        assert!(f.frequency > 0.0);
        assert!(path_subgraph_frequency(1, 2, 0.3, 10, 1).is_err());
    }

    #[test]
    fn shared_vertex_edges_correlate_positively() {
        let c = edge_correlation(2, 0.3, 20_000, 4).unwrap();
        assert!(c.p_joint <= c.p_edge);
        assert!(c.ratio.is_finite());
    }
}
