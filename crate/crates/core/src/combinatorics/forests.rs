use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const FOREST_MIN_T: usize = 3;
pub const FOREST_MAX_T: usize = 16;

fn check_t(t: usize) -> Result<()> {
    if !(FOREST_MIN_T..=FOREST_MAX_T).contains(&t) {
        return Err(invalid(format!(
            "need {FOREST_MIN_T} <= t <= {FOREST_MAX_T}, got {t}"
        )));
    }
    Ok(())
}

/// Elementary symmetric polynomials `E_k` of the `C_t` Laplacian spectrum,
/// expanded in floating point and rounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestCounts {
    pub t: usize,
    pub counts: Vec<u128>,
    /// Largest `|E_k - round(E_k)|`.
    pub max_residual: f64,
}

/// Expands `Π_j (1 + λ_j z)` with `λ_j = 4 sin²(π j / t)`.
pub fn forest_counts_via_spectrum(t: usize) -> Result<ForestCounts> {
    check_t(t)?;
    let mut coeffs = vec![0.0f64; t + 1];
    coeffs[0] = 1.0;
    for j in 0..t {
        let s = (std::f64::consts::PI * j as f64 / t as f64).sin();
        let lambda = 4.0 * s * s;
        for k in (1..=j + 1).rev() {
            coeffs[k] += lambda * coeffs[k - 1];
        }
    }
    let mut max_residual = 0.0f64;
    let counts = coeffs
        .iter()
        .map(|&c| {
            let r = c.round();
            max_residual = max_residual.max((c - r).abs());
            r.max(0.0) as u128
        })
        .collect();
    Ok(ForestCounts {
        t,
        counts,
        max_residual,
    })
}

/// The same `E_k` from the characteristic polynomial of the integer
/// Laplacian by the Faddeev–LeVerrier recursion, in exact arithmetic.
pub fn forest_counts_exact(t: usize) -> Result<Vec<i128>> {
    check_t(t)?;
    let mut a = vec![vec![0i128; t]; t];
    for i in 0..t {
        a[i][i] = 2;
        a[i][(i + 1) % t] -= 1;
        a[(i + 1) % t][i] -= 1;
    }
    let matmul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
        (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| (0..t).map(|k| x[i][k] * y[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    // det(zI - A) = Σ c_k z^{t-k}; E_k = (-1)^k c_k.
    let mut c = vec![0i128; t + 1];
    c[0] = 1;
    let mut m = vec![vec![0i128; t]; t];
    for k in 1..=t {
        let mut next = matmul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[k - 1];
        }
        m = next;
        let am = matmul(&a, &m);
        let trace: i128 = (0..t).map(|i| am[i][i]).sum();
        debug_assert_eq!(trace % k as i128, 0);
        c[k] = -trace / k as i128;
    }
    Ok(c.iter()
        .enumerate()
        .map(|(k, &ck)| if k % 2 == 0 { ck } else { -ck })
        .collect())
}
