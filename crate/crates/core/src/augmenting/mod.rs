//! Augmenting cycles, the graph of augmenting transpositions, matchings in
//! it, and Monte Carlo estimates of its edge and subgraph probabilities.
//!
//! Cycles are read against weights `W[i][j] = <x_i, y_j>` in a labelling
//! where the planted matching is the identity; see [`aligned_weights`].

mod bounds;
mod cycles;
mod edge_prob;
mod graph;
mod matching;
mod structure;
mod subgraph;

pub use bounds::{cycle_bound_ln, default_edge_weights, subgraph_bound_ln, weighted_laplacian};
pub use cycles::{
    enumerate_augmenting_cycles, is_augmenting, CycleEnumeration, CycleWitness, ENUMERATION_MAX_N,
};
pub use edge_prob::{
    estimate_edge_probability, estimate_edge_probability_with, sampler_by_name, EdgeProbEstimate,
    EdgeProbSampler, NaiveSampler, ScalarSampler, TwoPointSampler, MIN_EDGE_TRIALS, SAMPLER_NAMES,
};
pub use graph::{build_aug_graph, AugGraph};
pub use matching::{
    matcher_by_name, max_matching, Blossom, BruteForceMatching, GreedyMaximal, Matcher, Matching,
    MatchingMode, BLOSSOM_MAX_VERTICES, BRUTE_MATCHING_MAX_VERTICES, MATCHER_NAMES,
};
pub use structure::{
    aligned_estimate, aligned_weights, decompose_errors, lower_bound_errors, lower_bound_from,
    Decomposition, LowerBound,
};
pub use subgraph::{edge_correlation, path_subgraph_frequency, EdgeCorrelation, SubgraphFrequency};
