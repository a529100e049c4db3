//! Exact small-scale combinatorics: matchings on cycles, rooted spanning
//! forests through the Laplacian spectrum, and the number of cycles in the
//! union of two edge-disjoint perfect matchings.

mod cycle_counts;
mod forests;
mod matchings;

pub use cycle_counts::{
    cycle_count_distribution, cycle_mgf_bound_check, cycle_mgf_recurrence, CountMode,
    CycleCountDistribution, MgfBoundCheck, EXHAUSTIVE_MAX_ELL,
};
pub use forests::{
    forest_counts_exact, forest_counts_via_spectrum, ForestCounts, FOREST_MAX_T, FOREST_MIN_T,
};
pub use matchings::{
    matchings_on_cycle, matchings_on_cycle_brute, MatchingTable, MATCHING_BRUTE_MAX_T,
    MATCHING_TABLE_MAX_T,
};
