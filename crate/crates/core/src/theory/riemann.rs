//! The periodic log function `f`, its integral `I` and Riemann sums `S`,
//! with log-domain gaps for the strict inequalities relating them.
//!
//! Writing `q = exp(-2 asinh σ)`, the Lucas representation of `S` reduces
//! to `S(σ², t) = t·I(σ²) + 2 ln(1 - q^t)`. The gaps below use that form
//! so they stay representable long after `S - t·I` rounds to zero.

use std::f64::consts::{LN_2, PI};

use crate::error::{invalid, Result};

pub(crate) fn check_sigma2(sigma2: f64) -> Result<()> {
    if sigma2 > 0.0 && sigma2.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "sigma2 must be positive and finite, got {sigma2}"
        )))
    }
}

/// `f(σ², x) = ln(1 + sin²(πx)/σ²)`.
pub fn riemann_f(sigma2: f64, x: f64) -> Result<f64> {
    check_sigma2(sigma2)?;
    let s = (PI * x).sin();
    Ok((s * s / sigma2).ln_1p())
}

/// Closed form `I(σ²) = 2 ln((1 + √(1 + σ⁻²))/2)`.
pub fn integral_i(sigma2: f64) -> Result<f64> {
    check_sigma2(sigma2)?;
    let eps = 1.0 / sigma2;
    let root = (1.0 + eps).sqrt();
    // (root - 1)/2 without cancellation.
    Ok(2.0 * (0.5 * eps / (root + 1.0)).ln_1p())
}

/// `S(σ², t) = Σ_{j=1}^{t-1} f(σ², j/t)`.
pub fn riemann_sum(sigma2: f64, t: u32) -> Result<f64> {
    check_sigma2(sigma2)?;
    if t < 2 {
        return Err(invalid(format!("Riemann sum needs t >= 2, got {t}")));
    }
    Ok((1..t)
        .map(|j| {
            // Fold onto [0, 1/2] so f(j/t) and f(1 - j/t) agree exactly.
            let k = j.min(t - j);
            let s = (PI * k as f64 / t as f64).sin();
            (s * s / sigma2).ln_1p()
        })
        .sum())
}

/// `ln q = -2 asinh σ`.
pub(crate) fn ln_q(sigma2: f64) -> f64 {
    -2.0 * sigma2.sqrt().asinh()
}

/// `ln(1 - e^x)` for `x < 0`.
pub(crate) fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln(ln(1 + e^x))`, accurate when `e^x` underflows.
pub(crate) fn ln_ln1p_exp(x: f64) -> f64 {
    if x < -30.0 {
        x + (-0.5 * x.exp()).ln_1p()
    } else {
        x.exp().ln_1p().ln()
    }
}

/// `ln(-ln(1 - e^x))` for `x < 0`, accurate when `e^x` underflows.
pub(crate) fn ln_neg_ln1m_exp(x: f64) -> f64 {
    if x < -30.0 {
        x + (0.5 * x.exp()).ln_1p()
    } else {
        (-ln_one_minus_exp(x)).ln()
    }
}

/// `ln(t·I(σ²) - S(σ², t))`; finite means the gap is strictly positive.
pub fn ln_upper_gap(sigma2: f64, t: u32) -> Result<f64> {
    check_sigma2(sigma2)?;
    if t < 1 {
        return Err(invalid("upper gap needs t >= 1"));
    }
    Ok(LN_2 + ln_neg_ln1m_exp(t as f64 * ln_q(sigma2)))
}

/// `ln(S(σ², t) - S(σ², t-1) - I(σ²))` for `t >= 3`.
pub fn ln_increment_gap(sigma2: f64, t: u32) -> Result<f64> {
    check_sigma2(sigma2)?;
    if t < 3 {
        return Err(invalid(format!("increment gap needs t >= 3, got {t}")));
    }
    let lq = ln_q(sigma2);
    let tm1 = (t - 1) as f64;
    // Δ_t - I = 2 ln(1 + r), r = q^{t-1}(1 - q)/(1 - q^{t-1}).
    let ln_r = tm1 * lq + ln_one_minus_exp(lq) - ln_one_minus_exp(tm1 * lq);
    Ok(LN_2 + ln_ln1p_exp(ln_r))
}

/// `ln(S(σ², t) - S(σ², t0) - (t - t0)·I(σ²))` for `3 <= t0 + 1 <= t`.
pub fn ln_corollary_gap(sigma2: f64, t0: u32, t: u32) -> Result<f64> {
    if t0 < 2 || t <= t0 {
        return Err(invalid(format!(
            "corollary gap needs 2 <= t0 < t, got t0={t0} t={t}"
        )));
    }
    let terms = ((t0 + 1)..=t)
        .map(|k| ln_increment_gap(sigma2, k))
        .collect::<Result<Vec<_>>>()?;
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(m + terms.iter().map(|v| (v - m).exp()).sum::<f64>().ln())
}

/// `S(σ², t+1) - 2S(σ², t) + S(σ², t-1)` without cancellation, `t >= 2`.
pub fn riemann_second_difference(sigma2: f64, t: u32) -> Result<f64> {
    check_sigma2(sigma2)?;
    if t < 2 {
        return Err(invalid("second difference needs t >= 2"));
    }
    let lq = ln_q(sigma2);
    let g = |k: u32| ln_one_minus_exp(k as f64 * lq);
    Ok(2.0 * (g(t + 1) - 2.0 * g(t) + g(t - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use approx::assert_relative_eq;

    #[test]
    fn f_examples() {
        assert_eq!(riemann_f(0.7, 0.0).unwrap(), 0.0);
        assert_relative_eq!(riemann_f(1.0, 0.5).unwrap(), LN_2, max_relative = 1e-15);
        for k in 0..100 {
            let x = k as f64 / 99.0;
            let a = riemann_f(0.3, x).unwrap();
            let b = riemann_f(0.3, 1.0 - x).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        assert!(riemann_f(0.0, 0.5).is_err());
        assert!(riemann_f(-1.0, 0.5).is_err());
    }

    #[test]
    fn integral_examples() {
        assert!(integral_i(1e8).unwrap() < 1e-7);
        assert_relative_eq!(
            integral_i(1.0 / 8.0).unwrap(),
            2.0 * LN_2,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            integral_i(1.0 / 3.0).unwrap(),
            2.0 * 1.5f64.ln(),
            max_relative = 1e-14
        );
        assert!((integral_i(1.0 / 3.0).unwrap() - 0.810_930_2).abs() < 1e-7);
        assert!(integral_i(0.0).is_err());
    }

    #[test]
    fn integral_matches_quadrature() {
        for k in 0..50 {
            let sigma2 = 10f64.powf(-3.0 + 6.0 * k as f64 / 49.0);
            let (q, _) = integrate(|x| riemann_f(sigma2, x).unwrap(), 0.0, 1.0, 1e-12);
            assert!(
                (q - integral_i(sigma2).unwrap()).abs() < 1e-10,
                "sigma2={sigma2}"
            );
        }
    }

    #[test]
    fn small_t_closed_forms() {
        for &s2 in &[0.01, 0.3, 1.0, 7.0] {
            let y = 1.0 / s2;
            assert_relative_eq!(riemann_sum(s2, 2).unwrap(), y.ln_1p(), max_relative = 1e-13);
            assert_relative_eq!(
                riemann_sum(s2, 3).unwrap(),
                2.0 * (0.75 * y).ln_1p(),
                max_relative = 1e-13
            );
            assert_relative_eq!(
                riemann_sum(s2, 4).unwrap(),
                2.0 * (0.5 * y).ln_1p() + y.ln_1p(),
                max_relative = 1e-13
            );
        }
        assert_relative_eq!(riemann_sum(1.0, 2).unwrap(), LN_2, max_relative = 1e-15);
        assert!(riemann_sum(1.0, 1).is_err());
    }

    #[test]
    fn average_converges_to_integral() {
        for &s2 in &[0.001, 0.1, 1.0, 100.0] {
            let s = riemann_sum(s2, 10_000).unwrap();
            assert!((s / 10_000.0 - integral_i(s2).unwrap()).abs() < 1e-2);
        }
    }

    fn sigma_grid() -> Vec<f64> {
        (0..25)
            .map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 24.0))
            .collect()
    }

    #[test]
    fn gaps_agree_with_direct_sums_where_resolvable() {
        for s2 in sigma_grid() {
            let i = integral_i(s2).unwrap();
            for t in 3..=60 {
                let st = riemann_sum(s2, t).unwrap();
                let prev = riemann_sum(s2, t - 1).unwrap();
                let upper = t as f64 * i - st;
                let inc = st - prev - i;
                // Rounding in the direct differences grows with t·S.
                let noise = 1e-14 * t as f64 * (1.0 + st);
                let g = ln_upper_gap(s2, t).unwrap().exp();
                assert!((g - upper).abs() <= noise + 1e-9 * upper, "s2={s2} t={t}");
                let g = ln_increment_gap(s2, t).unwrap().exp();
                assert!((g - inc).abs() <= noise + 1e-9 * inc, "s2={s2} t={t}");
            }
        }
    }

    #[test]
    fn concavity_and_upper_bound_strict_in_log_domain() {
        for s2 in sigma_grid() {
            let mut prev = f64::INFINITY;
            for t in 3..=200 {
                let g = ln_increment_gap(s2, t).unwrap();
                assert!(g.is_finite(), "Δ_t ≤ I at sigma2={s2} t={t}");
                assert!(g < prev, "Δ_t not strictly decreasing at sigma2={s2} t={t}");
                prev = g;
            }
            for t in 2..=200 {
                assert!(ln_upper_gap(s2, t).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn concavity_and_upper_bound_in_direct_sums() {
        for s2 in sigma_grid() {
            let i = integral_i(s2).unwrap();
            let slack = 1e-12;
            let mut prev_delta = f64::INFINITY;
            let mut prev_s = riemann_sum(s2, 2).unwrap();
            for t in 3..=200 {
                let s = riemann_sum(s2, t).unwrap();
                let delta = s - prev_s;
                assert!(delta >= i - slack * t as f64);
                assert!(delta <= prev_delta + slack * t as f64);
                assert!(s <= t as f64 * i + slack * t as f64);
                prev_delta = delta;
                prev_s = s;
            }
        }
    }

    #[test]
    fn corollary_lower_bound() {
        for s2 in sigma_grid() {
            let i = integral_i(s2).unwrap();
            for t0 in 2..=4 {
                let s0 = riemann_sum(s2, t0).unwrap();
                assert!(ln_upper_gap(s2, t0).unwrap().is_finite());
                for t in (t0 + 1)..=200 {
                    assert!(ln_corollary_gap(s2, t0, t).unwrap().is_finite());
                    let lhs = riemann_sum(s2, t).unwrap();
                    assert!(lhs >= s0 + (t - t0) as f64 * i - 1e-12 * t as f64);
                }
            }
        }
    }

    #[test]
    fn stable_second_difference_matches_direct() {
        for &s2 in &[0.05, 1.0, 20.0] {
            for t in 3..30 {
                let direct = riemann_sum(s2, t + 1).unwrap() - 2.0 * riemann_sum(s2, t).unwrap()
                    + riemann_sum(s2, t - 1).unwrap();
                let stable = riemann_second_difference(s2, t).unwrap();
                assert!(stable <= 0.0);
                assert!((direct - stable).abs() < 1e-11, "s2={s2} t={t}");
            }
        }
    }
}
