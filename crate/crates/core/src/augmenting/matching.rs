use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::AugGraph;
use crate::error::{Error, Result};

/// Vertex limit for the exact matcher.
pub const BLOSSOM_MAX_VERTICES: usize = 200;
/// Vertex limit for the exhaustive matcher.
pub const BRUTE_MATCHING_MAX_VERTICES: usize = 16;

const NONE: usize = usize::MAX;

/// A matching algorithm on a general graph.
pub trait Matcher: Send + Sync {
    fn name(&self) -> &'static str;

    /// Returns matched edges as `(i, j)` with `i < j`, sorted.
    fn find(&self, g: &AugGraph) -> Result<Vec<(usize, usize)>>;
}

/// Edmonds' blossom algorithm; maximum cardinality, `O(V^3)`.
pub struct Blossom;

/// Scans edges in order and keeps each one whose endpoints are free.
pub struct GreedyMaximal;

/// Exhaustive search over vertex subsets.
pub struct BruteForceMatching;

pub const MATCHER_NAMES: &[&str] = &["blossom", "greedy", "brute"];

pub fn matcher_by_name(name: &str) -> Result<Box<dyn Matcher>> {
    match name {
        "blossom" => Ok(Box::new(Blossom)),
        "greedy" => Ok(Box::new(GreedyMaximal)),
        "brute" => Ok(Box::new(BruteForceMatching)),
        _ => Err(Error::UnknownStrategy {
            kind: "matcher",
            name: name.to_string(),
            known: MATCHER_NAMES.join(", "),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn max_matching(g: &AugGraph, mode: MatchingMode) -> Result<Matching> {
    let edges = match mode {
        MatchingMode::Exact => Blossom.find(g)?,
        MatchingMode::Greedy => GreedyMaximal.find(g)?,
    };
    Ok(Matching {
        size: edges.len(),
        edges,
    })
}

fn pairs_from_mate(mate: &[usize]) -> Vec<(usize, usize)> {
    (0..mate.len())
        .filter(|&v| mate[v] != NONE && v < mate[v])
        .map(|v| (v, mate[v]))
        .collect()
}

impl Matcher for GreedyMaximal {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn find(&self, g: &AugGraph) -> Result<Vec<(usize, usize)>> {
        let mut used = vec![false; g.n];
        let mut out = Vec::new();
        for &(a, b) in &g.edges {
            if !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                out.push((a, b));
            }
        }
        Ok(out)
    }
}

impl Matcher for BruteForceMatching {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn find(&self, g: &AugGraph) -> Result<Vec<(usize, usize)>> {
        if g.n > BRUTE_MATCHING_MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "brute-force matching (vertices)",
                limit: BRUTE_MATCHING_MAX_VERTICES,
                got: g.n,
            });
        }
        let adj = g.adjacency();
        // best[mask] = largest matching using only vertices outside `mask`,
        // computed by always deciding the lowest undecided vertex.
        let full = (1usize << g.n) - 1;
        let mut best = vec![0u8; 1 << g.n];
        for mask in (0..full).rev() {
            let v = (!mask).trailing_zeros() as usize;
            let skip = mask | (1 << v);
            let mut b = best[skip];
            for &u in &adj[v] {
                if skip & (1 << u) == 0 {
                    b = b.max(1 + best[skip | (1 << u)]);
                }
            }
            best[mask] = b;
        }
        let mut out = Vec::new();
        let mut mask = 0usize;
        while mask != full {
            let v = (!mask).trailing_zeros() as usize;
            let skip = mask | (1 << v);
            let target = best[mask];
            if best[skip] == target {
                mask = skip;
                continue;
            }
            let u = adj[v]
                .iter()
                .copied()
                .filter(|&u| skip & (1 << u) == 0)
                .find(|&u| 1 + best[skip | (1 << u)] == target)
                .expect("table is consistent");
            out.push((v.min(u), v.max(u)));
            mask = skip | (1 << u);
        }
        out.sort_unstable();
        Ok(out)
    }
}

struct BlossomState<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl BlossomState<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free endpoint.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for k in 0..self.adj[v].len() {
                let to = self.adj[v][k];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    queue.push_back(m);
                }
            }
        }
        None
    }
}

impl Matcher for Blossom {
    fn name(&self) -> &'static str {
        "blossom"
    }

    fn find(&self, g: &AugGraph) -> Result<Vec<(usize, usize)>> {
        if g.n > BLOSSOM_MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "exact matching (vertices)",
                limit: BLOSSOM_MAX_VERTICES,
                got: g.n,
            });
        }
        let adj = g.adjacency();
        let n = g.n;
        let mut st = BlossomState {
            adj: &adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
        };
        // Greedy warm start; the search below still reaches a maximum.
        for &(a, b) in &g.edges {
            if st.mate[a] == NONE && st.mate[b] == NONE {
                st.mate[a] = b;
                st.mate[b] = a;
            }
        }
        for root in 0..n {
            if st.mate[root] != NONE {
                continue;
            }
            if let Some(mut v) = st.find_path(root) {
                while v != NONE {
                    let pv = st.parent[v];
                    let ppv = st.mate[pv];
                    st.mate[v] = pv;
                    st.mate[pv] = v;
                    v = ppv;
                }
            }
        }
        Ok(pairs_from_mate(&st.mate))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_graph(n: usize, p: f64, seed: u64) -> AugGraph {
        let mut rng = crate::rng::rng_from_seed(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        AugGraph::from_edges(n, edges).unwrap()
    }

    fn assert_valid_matching(g: &AugGraph, m: &[(usize, usize)]) {
        let mut used = vec![false; g.n];
        for &(a, b) in m {
            assert!(g.has_edge(a, b));
            assert!(!used[a] && !used[b]);
            used[a] = true;
            used[b] = true;
        }
    }

    #[test]
    fn triangle_and_disjoint_edges() {
        let tri = AugGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(max_matching(&tri, MatchingMode::Exact).unwrap().size, 1);
        assert_eq!(max_matching(&tri, MatchingMode::Greedy).unwrap().size, 1);
        let k = 6;
        let pm = AugGraph::from_edges(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1))).unwrap();
        for mode in [MatchingMode::Exact, MatchingMode::Greedy] {
            assert_eq!(max_matching(&pm, mode).unwrap().size, k);
        }
    }

    #[test]
    fn odd_cycle_needs_blossom_contraction() {
        // A 5-cycle with a pendant path; greedy in edge order is suboptimal.
        let g = AugGraph::from_edges(
            8,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (0, 4),
                (4, 5),
                (5, 6),
                (6, 7),
            ],
        )
        .unwrap();
        let exact = Blossom.find(&g).unwrap();
        assert_valid_matching(&g, &exact);
        assert_eq!(exact.len(), 4);
        assert_eq!(BruteForceMatching.find(&g).unwrap().len(), 4);
    }

    #[test]
    fn blossom_equals_brute_force_on_random_graphs() {
        for seed in 0..200u64 {
            let n = 1 + (seed as usize % 16);
            let p = [0.1, 0.25, 0.5, 0.8][seed as usize % 4];
            let g = random_graph(n, p, seed);
            let exact = Blossom.find(&g).unwrap();
            let brute = BruteForceMatching.find(&g).unwrap();
            assert_valid_matching(&g, &exact);
            assert_valid_matching(&g, &brute);
            assert_eq!(exact.len(), brute.len(), "seed {seed}");
        }
    }

    #[test]
    fn greedy_is_within_half_of_exact() {
        for seed in 0..100u64 {
            let n = 2 + (seed as usize % 59);
            let g = random_graph(n, 0.08, 1000 + seed);
            let exact = Blossom.find(&g).unwrap().len();
            let greedy = GreedyMaximal.find(&g).unwrap();
            assert_valid_matching(&g, &greedy);
            assert!(2 * greedy.len() >= exact && exact >= greedy.len());
        }
    }

    #[test]
    fn guards_and_registry() {
        let big = AugGraph::from_edges(201, [(0, 1)]).unwrap();
        assert!(Blossom.find(&big).is_err());
        assert_eq!(GreedyMaximal.find(&big).unwrap().len(), 1);
        let mid = AugGraph::from_edges(17, [(0, 1)]).unwrap();
        assert!(BruteForceMatching.find(&mid).is_err());
        for name in MATCHER_NAMES {
            assert_eq!(matcher_by_name(name).unwrap().name(), *name);
        }
        assert!(matcher_by_name("hopcroft").is_err());
    }
}
