use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Simple undirected graph on `0..n` with edges stored as `(i, j)`, `i < j`,
/// in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AugGraph {
    /// Normalizes, sorts and deduplicates `edges`; rejects loops.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(invalid(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(invalid(format!("edge ({a}, {b}) out of range for n={n}")));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self { n, edges: out })
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }
}

/// Graph whose edges are the augmenting transpositions of `w`:
/// `{i, j}` with `w[i][j] + w[j][i] >= w[i][i] + w[j][j]`.
pub fn build_aug_graph(w: ArrayView2<'_, f64>) -> Result<AugGraph> {
    let (n, c) = w.dim();
    if n != c {
        return Err(Error::DimensionMismatch(format!(
            "weight matrix is {n}x{c}"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if w[[i, j]] + w[[j, i]] >= w[[i, i]] + w[[j, j]] {
                edges.push((i, j));
            }
        }
    }
    Ok(AugGraph { n, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn single_hand_edge() {
        let w = array![[1.0, 1.0, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 5.0]];
        let g = build_aug_graph(w.view()).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn from_edges_normalizes() {
        let g = AugGraph::from_edges(4, [(3, 1), (1, 3), (0, 2)]).unwrap();
        assert_eq!(g.edges, vec![(0, 2), (1, 3)]);
        assert!(AugGraph::from_edges(4, [(2, 2)]).is_err());
        assert!(AugGraph::from_edges(4, [(2, 4)]).is_err());
    }
}
