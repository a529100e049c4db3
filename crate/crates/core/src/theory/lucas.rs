//! Lucas polynomials `L_0 = 2, L_1 = x, L_k = x·L_{k-1} + L_{k-2}` and the
//! Lucas-side expression for the Riemann sums.

use super::riemann::{check_sigma2, ln_one_minus_exp};
use crate::error::{invalid, Result};

/// Recursion cut-over for [`lucas`].
pub const LUCAS_RECURSION_MAX_K: u32 = 60;

pub fn lucas_recursive(k: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (2.0, x);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        (prev, cur) = (cur, x * cur + prev);
    }
    cur
}

/// Binet: `L_k(x) = α^k + β^k` with `α, β = (x ± √(x² + 4))/2`.
pub fn lucas_binet(k: u32, x: f64) -> f64 {
    let root = (x * x + 4.0).sqrt();
    let (alpha, beta) = if x >= 0.0 {
        let a = 0.5 * (x + root);
        (a, -1.0 / a)
    } else {
        let b = 0.5 * (x - root);
        (-1.0 / b, b)
    };
    alpha.powi(k as i32) + beta.powi(k as i32)
}

pub fn lucas(k: u32, x: f64) -> f64 {
    if k <= LUCAS_RECURSION_MAX_K {
        lucas_recursive(k, x)
    } else {
        lucas_binet(k, x)
    }
}

/// `ln L_k(x)` for `x > 0`, finite for any `k`.
pub fn lucas_ln(k: u32, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(invalid(format!("log Lucas value needs x > 0, got {x}")));
    }
    // α = e^{asinh(x/2)}, and β/α = -α^{-2}.
    let ln_alpha = (0.5 * x).asinh();
    let k = k as f64;
    let ratio = (-2.0 * k * ln_alpha).exp();
    let sign = if k as u64 % 2 == 0 { 1.0 } else { -1.0 };
    Ok(k * ln_alpha + (sign * ratio).ln_1p())
}

/// `ln((4σ²)^{-t}(L_{2t}(2σ) - 2))`, evaluated through
/// `L_{2t}(2σ) - 2 = (2 sinh(t·asinh σ))²`. Defined for every `t >= 1`.
pub fn lucas_side_ln(sigma2: f64, t: u32) -> Result<f64> {
    check_sigma2(sigma2)?;
    if t < 1 {
        return Err(invalid("Lucas side needs t >= 1"));
    }
    let y = t as f64 * sigma2.sqrt().asinh();
    // ln(2 sinh y) = y + ln(1 - e^{-2y}).
    let ln_two_sinh = y + ln_one_minus_exp(-2.0 * y);
    Ok(2.0 * ln_two_sinh - t as f64 * (4.0 * sigma2).ln())
}

/// The Riemann sum `S(σ², t)` through the Lucas identity, `t >= 3`.
pub fn riemann_sum_via_lucas(sigma2: f64, t: u32) -> Result<f64> {
    if t < 3 {
        return Err(invalid(format!(
            "Lucas identity is stated for t >= 3, got {t}"
        )));
    }
    lucas_side_ln(sigma2, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::riemann::riemann_sum;
    use approx::assert_relative_eq;

    #[test]
    fn small_values() {
        assert_eq!(lucas(0, 3.7), 2.0);
        assert_eq!(lucas(2, 3.0), 11.0);
        assert_eq!(lucas(4, 1.0), 7.0);
        assert_eq!(lucas(1, -2.5), -2.5);
        // L_3 = x³ + 3x, L_4 = x⁴ + 4x² + 2.
        for &x in &[0.3, 1.7, 4.0] {
            assert_relative_eq!(lucas(3, x), x * x * x + 3.0 * x, max_relative = 1e-14);
            assert_relative_eq!(
                lucas(4, x),
                x.powi(4) + 4.0 * x * x + 2.0,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn recursion_matches_binet() {
        for k in 0..=60 {
            for step in 0..=40 {
                let x = 0.1 + step as f64 * (9.9 / 40.0);
                let r = lucas_recursive(k, x);
                let b = lucas_binet(k, x);
                assert!((r - b).abs() <= 1e-9 * r.abs(), "k={k} x={x}");
                assert_relative_eq!(
                    lucas_ln(k, x).unwrap(),
                    r.ln(),
                    max_relative = 1e-9,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn log_variant_survives_large_k() {
        let v = lucas_ln(5000, 2.0).unwrap();
        assert_relative_eq!(v, 5000.0 * (1.0 + 2f64.sqrt()).ln(), max_relative = 1e-12);
    }

    #[test]
    fn identity_matches_direct_sum() {
        assert_relative_eq!(
            riemann_sum_via_lucas(1.0, 3).unwrap(),
            2.0 * 1.75f64.ln(),
            max_relative = 1e-12
        );
        for &s2 in &[1e-3, 0.01, 0.3, 1.0, 10.0, 1e3] {
            for t in 3..=200 {
                let a = riemann_sum_via_lucas(s2, t).unwrap();
                let b = riemann_sum(s2, t).unwrap();
                assert!((a - b).abs() <= 1e-9 * b.abs(), "s2={s2} t={t}");
            }
        }
        assert_relative_eq!(
            riemann_sum_via_lucas(0.3, 50).unwrap(),
            riemann_sum(0.3, 50).unwrap(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn identity_through_polynomial_values() {
        // The literal polynomial route, while L_{2t}(2σ) - 2 has no cancellation.
        for &s2 in &[0.5, 2.0] {
            let x = 2.0 * f64::sqrt(s2);
            for t in 3..=25 {
                let lhs = (lucas_recursive(2 * t, x) - 2.0).ln() - t as f64 * (4.0 * s2).ln();
                assert_relative_eq!(lhs, riemann_sum(s2, t).unwrap(), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn identity_also_holds_at_two() {
        // L_4(2σ) - 2 = 16σ⁴ + 16σ², so the Lucas side at t = 2 is ln(1 + σ⁻²),
        // which is S(σ², 2) itself rather than ln(1 + σ⁻²/4).
        for &s2 in &[0.05, 0.5, 1.0, 3.0] {
            let lucas_side = lucas_side_ln(s2, 2).unwrap();
            assert_relative_eq!(
                lucas_side,
                riemann_sum(s2, 2).unwrap(),
                max_relative = 1e-12
            );
            assert!((lucas_side - (0.25 / s2).ln_1p()).abs() > 1e-3);
            let poly = (lucas_recursive(4, 2.0 * s2.sqrt()) - 2.0) / (16.0 * s2 * s2);
            assert_relative_eq!(poly, 1.0 + 1.0 / s2, max_relative = 1e-12);
        }
        assert!(riemann_sum_via_lucas(1.0, 2).is_err());
    }
}
