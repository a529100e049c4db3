use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::matching::BLOSSOM_MAX_VERTICES;
use super::{build_aug_graph, is_augmenting, max_matching, CycleWitness, MatchingMode};
use crate::error::Result;
use crate::lap::{mle, AssignmentSolution};
use crate::model::{error_report, Instance, Permutation};

/// Inner products relabelled so the planted matching is the identity:
/// `w[i][j] = <x_i, y_{π*(j)}>`.
pub fn aligned_weights(inst: &Instance) -> Array2<f64> {
    let n = inst.n();
    let mut w = Array2::zeros((n, n));
    for i in 0..n {
        let xi = inst.x.row(i);
        for j in 0..n {
            w[[i, j]] = xi.dot(&inst.y.row(inst.planted.apply(j)));
        }
    }
    w
}

/// `π*⁻¹ ∘ π̂`: the estimate in the labelling where the truth is the identity.
pub fn aligned_estimate(estimate: &Permutation, planted: &Permutation) -> Permutation {
    planted.inverse().after(estimate)
}

/// A matching in `G^aug` together with the estimator error it bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub m: usize,
    pub matching: Vec<(usize, usize)>,
    pub mode: MatchingMode,
    pub graph_edges: usize,
    pub mle_errors: usize,
    /// `mle_errors >= m`.
    pub holds: bool,
}

/// Exact matching up to the blossom vertex limit, a maximal one beyond it;
/// either size bounds the error count from below.
pub fn lower_bound_from(inst: &Instance, sol: &AssignmentSolution) -> Result<LowerBound> {
    let g = build_aug_graph(aligned_weights(inst).view())?;
    let mode = if g.n <= BLOSSOM_MAX_VERTICES {
        MatchingMode::Exact
    } else {
        MatchingMode::Greedy
    };
    let matching = max_matching(&g, mode)?;
    let mle_errors = error_report(&sol.assignment, &inst.planted)?.error_count;
    Ok(LowerBound {
        m: matching.size,
        matching: matching.edges,
        mode,
        graph_edges: g.edges.len(),
        mle_errors,
        holds: mle_errors >= matching.size,
    })
}

pub fn lower_bound_errors(inst: &Instance) -> Result<LowerBound> {
    lower_bound_from(inst, &mle(inst)?)
}

/// The estimate's errors split into its non-trivial cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub error_count: usize,
    pub cycles: Vec<CycleWitness>,
    /// The cycles cover exactly the error set.
    pub support_matches: bool,
    pub all_augmenting: bool,
}

pub fn decompose_errors(inst: &Instance, sol: &AssignmentSolution) -> Result<Decomposition> {
    let w = aligned_weights(inst);
    let report = error_report(&sol.assignment, &inst.planted)?;
    let aligned = aligned_estimate(&sol.assignment, &inst.planted);
    let cycles = aligned
        .nontrivial_cycles()
        .iter()
        .map(|c| is_augmenting(w.view(), c))
        .collect::<Result<Vec<_>>>()?;
    let mut support: Vec<usize> = cycles
        .iter()
        .flat_map(|c| c.vertices.iter().copied())
        .collect();
    support.sort_unstable();
    Ok(Decomposition {
        error_count: report.error_count,
        support_matches: support == report.error_indices,
        all_augmenting: cycles.iter().all(CycleWitness::is_augmenting),
        cycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generate_instance;

    #[test]
    fn zero_noise_has_no_edges_or_errors() {
        let inst = generate_instance(40, 2, 0.0, 3).unwrap();
        let lb = lower_bound_errors(&inst).unwrap();
        assert_eq!((lb.m, lb.mle_errors, lb.graph_edges), (0, 0, 0));
        let w = aligned_weights(&inst);
        let c = is_augmenting(w.view(), &[0, 1]).unwrap();
        let gap: f64 = inst
            .x
            .row(0)
            .iter()
            .zip(inst.x.row(1))
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        assert!((c.margin + gap).abs() < 1e-12);
    }

    #[test]
    fn aligned_weights_diagonal_is_planted() {
        let inst = generate_instance(9, 3, 0.2, 8).unwrap();
        let w = aligned_weights(&inst);
        for i in 0..9 {
            let want = inst.x.row(i).dot(&(&inst.x.row(i) + &inst.noise.row(i)));
            assert!((w[[i, i]] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn errors_decompose_into_augmenting_cycles() {
        for seed in 0..200u64 {
            let n = 2 + (seed as usize % 29);
            let inst = generate_instance(n, 2, 0.3, seed).unwrap();
            let sol = mle(&inst).unwrap();
            let dec = decompose_errors(&inst, &sol).unwrap();
            assert!(dec.support_matches && dec.all_augmenting, "seed {seed}");
            let lb = lower_bound_from(&inst, &sol).unwrap();
            assert!(lb.holds && 2 * lb.m <= n);
        }
    }
}
