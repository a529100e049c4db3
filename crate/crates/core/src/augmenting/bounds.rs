use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::theory::{riemann_sum, sorted_eigenvalues};

/// `Δᵀ D Δ` for incidence matrix `Δ` of `edges` and diagonal edge weights.
pub fn weighted_laplacian(v: usize, edges: &[(usize, usize)], weights: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(v, v);
    for (&(a, b), &w) in edges.iter().zip(weights) {
        m[(a, a)] += w;
        m[(b, b)] += w;
        m[(a, b)] -= w;
        m[(b, a)] -= w;
    }
    m
}

/// Natural log of the Chernoff bound on `P[G ⊆ G^aug]` for the graph on
/// `v` vertices with `edges` and diagonal edge weights `weights` (all
/// `>= 0`): `-(d/2) Σ ln(1 + 2μ - σ²μ²)` over eigenvalues `μ` of `ΔᵀDΔ`.
///
/// Returns `None` when some factor is non-positive, where the Gaussian
/// moment generating function diverges and the bound is vacuous.
pub fn subgraph_bound_ln(
    d: f64,
    sigma2: f64,
    v: usize,
    edges: &[(usize, usize)],
    weights: &[f64],
) -> Result<Option<f64>> {
    if !(d >= 1.0 && sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(invalid(format!(
            "need d >= 1 and sigma2 > 0, got d={d} sigma2={sigma2}"
        )));
    }
    if weights.len() != edges.len() {
        return Err(invalid(format!(
            "{} weights for {} edges",
            weights.len(),
            edges.len()
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(invalid("edge weights must be finite and >= 0"));
    }
    if edges.iter().any(|&(a, b)| a >= v || b >= v || a == b) {
        return Err(invalid("edges must join distinct vertices below v"));
    }
    let mut total = 0.0;
    for mu in sorted_eigenvalues(weighted_laplacian(v, edges, weights)) {
        let factor = 1.0 + 2.0 * mu - sigma2 * mu * mu;
        if factor <= 0.0 {
            return Ok(None);
        }
        total += factor.ln();
    }
    Ok(Some(-0.5 * d * total))
}

/// The weights `1/(2σ²)` on every edge.
pub fn default_edge_weights(sigma2: f64, m: usize) -> Vec<f64> {
    vec![0.5 / sigma2; m]
}

/// `-(d/2) S(σ², t)`: log bound for a fixed augmenting `t`-cycle, and for
/// a path or cycle on `t` vertices being contained in `G^aug`.
pub fn cycle_bound_ln(d: f64, sigma2: f64, t: u32) -> Result<f64> {
    Ok(-0.5 * d * riemann_sum(sigma2, t)?)
}
