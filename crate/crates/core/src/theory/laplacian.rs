//! Path and cycle Laplacians and their closed-form spectra.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

/// Graph Laplacian of an edge list on `v` vertices.
pub fn laplacian(v: usize, edges: &[(usize, usize)]) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(v, v);
    for &(i, j) in edges {
        l[(i, i)] += 1.0;
        l[(j, j)] += 1.0;
        l[(i, j)] -= 1.0;
        l[(j, i)] -= 1.0;
    }
    l
}

pub fn path_edges(t: usize) -> Vec<(usize, usize)> {
    (1..t).map(|i| (i - 1, i)).collect()
}

pub fn cycle_edges(t: usize) -> Vec<(usize, usize)> {
    let mut e = path_edges(t);
    if t >= 3 {
        e.push((t - 1, 0));
    }
    e
}

/// Sorted eigenvalues of a symmetric matrix.
pub fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `2(1 - cos(πk/t))` for `k = 0..t`, sorted.
pub fn path_spectrum(t: usize) -> Vec<f64> {
    (0..t)
        .map(|k| 2.0 * (1.0 - (PI * k as f64 / t as f64).cos()))
        .collect()
}

/// `4 sin²(πk/t)` for `k = 0..t`, sorted.
pub fn cycle_spectrum(t: usize) -> Vec<f64> {
    let mut ev: Vec<f64> = (0..t)
        .map(|k| 4.0 * (PI * k as f64 / t as f64).sin().powi(2))
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectra_match_closed_forms() {
        for t in 2..=12 {
            let p = sorted_eigenvalues(laplacian(t, &path_edges(t)));
            for (a, b) in p.iter().zip(path_spectrum(t)) {
                assert!((a - b).abs() < 1e-9, "path t={t}");
            }
            if t >= 3 {
                let c = sorted_eigenvalues(laplacian(t, &cycle_edges(t)));
                for (a, b) in c.iter().zip(cycle_spectrum(t)) {
                    assert!((a - b).abs() < 1e-9, "cycle t={t}");
                }
            }
        }
    }
}
