use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{Error, Result};

/// Disagreement between an estimate and the planted permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error_count: usize,
    /// `ln(max(1, error_count)) / ln n`, zero when `n = 1`.
    pub poly_rate: f64,
    pub error_indices: Vec<usize>,
}

pub fn poly_rate(error_count: usize, n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    (error_count.max(1) as f64).ln() / (n as f64).ln()
}

pub fn error_report(estimate: &Permutation, truth: &Permutation) -> Result<ErrorReport> {
    if estimate.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "estimate has {} entries, truth has {}",
            estimate.len(),
            truth.len()
        )));
    }
    let error_indices: Vec<usize> = (0..truth.len())
        .filter(|&i| estimate.apply(i) != truth.apply(i))
        .collect();
    Ok(ErrorReport {
        error_count: error_indices.len(),
        poly_rate: poly_rate(error_indices.len(), truth.len()),
        error_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_transposition() {
        let truth = Permutation::identity(10);
        let est = Permutation::new(vec![1, 0, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        let r = error_report(&est, &truth).unwrap();
        assert_eq!(r.error_count, 2);
        assert_eq!(r.error_indices, vec![0, 1]);
        assert!((r.poly_rate - 2f64.ln() / 10f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exact_recovery_has_zero_rate() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let r = error_report(&p, &p).unwrap();
        assert_eq!(r.error_count, 0);
        assert_eq!(r.poly_rate, 0.0);
    }

    #[test]
    fn size_mismatch() {
        assert!(error_report(&Permutation::identity(2), &Permutation::identity(3)).is_err());
    }
}
