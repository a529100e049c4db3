//! Noise thresholds and the exponent curve `c(t)`.
//!
//! Everything is expressed through `L/d` with `L = ln n`, so `n^{k/d}`
//! becomes `exp(k·L/d)` and fractional `d = a·ln n` is handled directly.

use serde::{Deserialize, Serialize};

use super::riemann::{integral_i, riemann_second_difference, riemann_sum};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `1/(n^{4/d} - 1)`: zero errors below it.
    pub perfect: f64,
    /// `1/((2n^{1/d} - 1)² - 1)`: end of the proven sublinear window.
    pub strong_conjectured: f64,
    /// `1/(n^{2/d} - 1)`.
    pub greedy_third: f64,
}

impl Thresholds {
    /// Thresholds at `d = a·ln n`, i.e. `n^{1/d} = e^{1/a}`.
    pub fn from_ratio(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(invalid(format!("d / ln n must be positive, got {a}")));
        }
        let h = 1.0 / a;
        Ok(Self {
            perfect: 1.0 / (4.0 * h).exp_m1(),
            // (2s - 1)² - 1 = 4s(s - 1).
            strong_conjectured: 1.0 / (4.0 * h.exp() * h.exp_m1()),
            greedy_third: 1.0 / (2.0 * h).exp_m1(),
        })
    }
}

pub(crate) fn check_n_d(n: u64, d: f64) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("need n >= 2, got {n}")));
    }
    if !(d >= 1.0 && d.is_finite()) {
        return Err(invalid(format!("need d >= 1, got {d}")));
    }
    Ok(())
}

pub fn thresholds(n: u64, d: f64) -> Result<Thresholds> {
    check_n_d(n, d)?;
    Thresholds::from_ratio(d / (n as f64).ln())
}

/// `c(t) = t - d·S(σ², t)/(2 ln n)`: the expected number of augmenting
/// `t`-cycles is at most `n^{c(t)}`.
pub fn cycle_mass_exponent(n: u64, d: f64, sigma2: f64, t: u32) -> Result<f64> {
    check_n_d(n, d)?;
    Ok(t as f64 - d * riemann_sum(sigma2, t)? / (2.0 * (n as f64).ln()))
}

/// `c(t+1) - 2c(t) + c(t-1)`, computed without cancellation.
pub fn cycle_mass_second_difference(n: u64, d: f64, sigma2: f64, t: u32) -> Result<f64> {
    check_n_d(n, d)?;
    Ok(-d * riemann_second_difference(sigma2, t)? / (2.0 * (n as f64).ln()))
}

/// Limiting slope `1 - d·I(σ²)/(2 ln n)` of `c(t)`.
pub fn cycle_mass_slope_limit(n: u64, d: f64, sigma2: f64) -> Result<f64> {
    check_n_d(n, d)?;
    Ok(1.0 - d * integral_i(sigma2)? / (2.0 * (n as f64).ln()))
}

/// Limiting `ln(1 ∨ |E|)/ln n` at `d = a·ln n` for σ² below the strong
/// threshold: `max(0, 2 - (a/2)·ln(1 + σ⁻²))`. `None` above the window,
/// where the error is conjectured to be linear.
pub fn log_regime_rate(a: f64, sigma2: f64) -> Result<Option<f64>> {
    let th = Thresholds::from_ratio(a)?;
    if !(sigma2 > 0.0) {
        return Err(invalid(format!("sigma2 must be positive, got {sigma2}")));
    }
    if sigma2 >= th.strong_conjectured {
        return Ok(None);
    }
    Ok(Some((2.0 - 0.5 * a * (1.0 / sigma2).ln_1p()).max(0.0)))
}

/// Rate `2 - a·ln(2e^{1/a} - 1)` at the upper edge of the sublinear window.
pub fn log_regime_edge_rate(a: f64) -> f64 {
    2.0 - a * (2.0 * (1.0 / a).exp() - 1.0).ln()
}

/// Lower bound on the rate obtainable from augmenting 2-cycles alone:
/// `max(0, 2 - (a/2)·ln(1 + σ⁻²))` capped at 1, without the window cut.
pub fn two_cycle_rate(a: f64, sigma2: f64) -> f64 {
    (2.0 - 0.5 * a * (1.0 / sigma2).ln_1p()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let a4 = Thresholds::from_ratio(4.0).unwrap();
        assert_relative_eq!(
            a4.perfect,
            1.0 / (std::f64::consts::E - 1.0),
            max_relative = 1e-14
        );
        assert!((a4.perfect - 0.58198).abs() < 1e-5);
        assert_relative_eq!(
            thresholds(2, 4.0).unwrap().perfect,
            1.0,
            max_relative = 1e-14
        );
        let n = 1000u64;
        let d = 100.0 * (n as f64).ln();
        let strong = thresholds(n, d).unwrap().strong_conjectured;
        assert!((strong / 25.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn direct_substitution_agrees() {
        for &(n, d) in &[(10u64, 1.0), (100, 2.0), (1000, 7.0), (50, 30.0)] {
            let th = thresholds(n, d).unwrap();
            let s = (n as f64).powf(1.0 / d);
            assert_relative_eq!(th.perfect, 1.0 / (s.powi(4) - 1.0), max_relative = 1e-10);
            assert_relative_eq!(
                th.strong_conjectured,
                1.0 / ((2.0 * s - 1.0).powi(2) - 1.0),
                max_relative = 1e-10
            );
            assert_relative_eq!(th.greedy_third, 1.0 / (s * s - 1.0), max_relative = 1e-10);
        }
    }

    #[test]
    fn c_examples() {
        let (n, d, s2) = (1000u64, 6.0, 0.2);
        let c2 = cycle_mass_exponent(n, d, s2, 2).unwrap();
        let expect = 2.0 - d * (1.0 / s2).ln_1p() / (2.0 * (n as f64).ln());
        assert_relative_eq!(c2, expect, max_relative = 1e-13);
        for t in 3..=100 {
            assert!(cycle_mass_second_difference(n, d, s2, t).unwrap() >= 0.0);
            let direct = cycle_mass_exponent(n, d, s2, t + 1).unwrap()
                - 2.0 * cycle_mass_exponent(n, d, s2, t).unwrap()
                + cycle_mass_exponent(n, d, s2, t - 1).unwrap();
            assert!(direct >= -1e-12);
        }
        let slope = cycle_mass_exponent(n, d, s2, 501).unwrap()
            - cycle_mass_exponent(n, d, s2, 500).unwrap();
        assert!((slope - cycle_mass_slope_limit(n, d, s2).unwrap()).abs() < 1e-3);
        assert!(cycle_mass_exponent(1, d, s2, 2).is_err());
    }

    #[test]
    fn regime_rates() {
        let a = 4.0;
        let th = Thresholds::from_ratio(a).unwrap();
        assert!(log_regime_rate(a, th.perfect).unwrap().unwrap().abs() < 1e-12);
        let just_below = th.strong_conjectured * (1.0 - 1e-12);
        assert_relative_eq!(
            log_regime_rate(a, just_below).unwrap().unwrap(),
            2.0 - 4.0 * (2.0 * 0.25f64.exp() - 1.0).ln(),
            max_relative = 1e-9
        );
        assert!(log_regime_rate(a, th.strong_conjectured).unwrap().is_none());
        let edge = log_regime_edge_rate(a);
        assert!(edge > 0.0 && edge < 1.0);
    }

    proptest! {
        #[test]
        fn ordering(n in 2u64..1_000_000, d in 1.0f64..500.0) {
            let th = thresholds(n, d).unwrap();
            prop_assert!(th.perfect <= th.strong_conjectured * (1.0 + 1e-12));
            prop_assert!(th.strong_conjectured <= th.greedy_third * (1.0 + 1e-12));
        }
    }
}
