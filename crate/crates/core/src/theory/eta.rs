use serde::{Deserialize, Serialize};

use super::riemann::check_sigma2;
use crate::error::Result;

/// The rate constants `η₁ = ¾S₂ - ¼S₄`, `η₂ = S₂ - ½S₃`, `η₃ = ½S₂ - ½I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eta {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
}

/// Closed forms in `y = σ⁻²`: `e^{η₁} = √((1+y)/(1+y/2))`,
/// `e^{η₂} = (1+y)/(1+3y/4)`, `e^{η₃} = 2√(1+y)/(1+√(1+y))`.
pub fn eta(sigma2: f64) -> Result<Eta> {
    check_sigma2(sigma2)?;
    let y = 1.0 / sigma2;
    let root = (1.0 + y).sqrt();
    Ok(Eta {
        eta1: 0.5 * (y.ln_1p() - (0.5 * y).ln_1p()),
        eta2: y.ln_1p() - (0.75 * y).ln_1p(),
        // ln 2 + ½ln(1+y) - ln(1+√(1+y)) = ½ln(1+y) - ln(1 + (√(1+y)-1)/2).
        eta3: 0.5 * y.ln_1p() - (0.5 * y / (root + 1.0)).ln_1p(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::riemann::{integral_i, riemann_sum};
    use approx::assert_relative_eq;

    #[test]
    fn closed_forms_match_definitions() {
        for k in 0..40 {
            let s2 = 10f64.powf(-3.0 + 6.0 * k as f64 / 39.0);
            let e = eta(s2).unwrap();
            let s = |t| riemann_sum(s2, t).unwrap();
            let i = integral_i(s2).unwrap();
            let tol = 1e-12 * (1.0 + s(4));
            assert!((e.eta1 - (0.75 * s(2) - 0.25 * s(4))).abs() < tol);
            assert!((e.eta2 - (s(2) - 0.5 * s(3))).abs() < tol);
            assert!((e.eta3 - 0.5 * (s(2) - i)).abs() < tol);
        }
    }

    #[test]
    fn third_at_one_third() {
        assert_relative_eq!(
            eta(1.0 / 3.0).unwrap().eta3,
            (4.0f64 / 3.0).ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn ordering_and_bound() {
        for k in 0..200 {
            let s2 = 10f64.powf(-3.0 + 6.0 * k as f64 / 199.0);
            let e = eta(s2).unwrap();
            assert!(e.eta2 <= e.eta1 && e.eta1 <= e.eta3, "s2={s2}");
            assert!(e.eta3 <= 3.0 / (2.0 + 8.0 * s2));
            assert!(e.eta2 > 0.0);
        }
        assert!(eta(0.0).is_err());
    }
}
