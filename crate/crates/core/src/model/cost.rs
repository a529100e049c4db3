use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use super::Instance;
use crate::error::{Error, Result};

/// Squared-distance costs `w0[i][j] = |x_i - y_j|^2` and inner-product
/// weights `w[i][j] = <x_i, y_j>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostMatrices {
    pub w0: Array2<f64>,
    pub w: Array2<f64>,
}

impl CostMatrices {
    pub fn from_points(x: ArrayView2<'_, f64>, y: ArrayView2<'_, f64>) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch(format!(
                "x is {:?} but y is {:?}",
                x.dim(),
                y.dim()
            )));
        }
        let n = x.nrows();
        let w = x.dot(&y.t());
        // Summed directly rather than via |x|^2 + |y|^2 - 2w so entries stay
        // non-negative and exact for coincident points.
        let mut w0 = Array2::zeros((n, n));
        for i in 0..n {
            let xi = x.row(i);
            for j in 0..n {
                w0[[i, j]] = xi
                    .iter()
                    .zip(y.row(j).iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
            }
        }
        Ok(Self { w0, w })
    }

    pub fn n(&self) -> usize {
        self.w.nrows()
    }
}

pub fn cost_matrices(inst: &Instance) -> CostMatrices {
    CostMatrices::from_points(inst.x.view(), inst.y.view())
        .expect("instance coordinates share a shape")
}
