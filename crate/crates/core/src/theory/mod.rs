//! Closed-form analytic quantities: Riemann sums, Lucas polynomials,
//! thresholds, exponent curves, rate constants and Laplacian spectra.

mod eta;
mod laplacian;
mod lucas;
mod phat;
mod rates;
mod riemann;
mod thresholds;

use serde::{Deserialize, Serialize};

pub use eta::{eta, Eta};
pub use laplacian::{
    cycle_edges, cycle_spectrum, laplacian, path_edges, path_spectrum, sorted_eigenvalues,
};
pub use lucas::{
    lucas, lucas_binet, lucas_ln, lucas_recursive, lucas_side_ln, riemann_sum_via_lucas,
    LUCAS_RECURSION_MAX_K,
};
pub use phat::{phat_bounds, PhatBounds};
pub use rates::{
    constraint_load, entropy_h, is_feasible, rate_function_f, second_moment_rates, sup_f,
    RateInputs, RatePoint, SecondMomentRates, SupF, RATE_K,
};
pub use riemann::{
    integral_i, ln_corollary_gap, ln_increment_gap, ln_upper_gap, riemann_f,
    riemann_second_difference, riemann_sum,
};
pub use thresholds::{
    cycle_mass_exponent, cycle_mass_second_difference, cycle_mass_slope_limit,
    log_regime_edge_rate, log_regime_rate, thresholds, two_cycle_rate, Thresholds,
};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub t: u32,
    pub value: f64,
}

/// Every analytic quantity for one parameter triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryProfile {
    pub n: u64,
    pub d: f64,
    pub sigma2: f64,
    /// `I(σ²)`.
    pub integral: f64,
    pub s_table: Vec<TableEntry>,
    pub thresholds: Thresholds,
    pub c_curve: Vec<TableEntry>,
    pub eta: Eta,
    pub phat_bounds: PhatBounds,
}

pub fn theory_profile(
    n: u64,
    d: f64,
    sigma2: f64,
    t_min: u32,
    t_max: u32,
) -> Result<TheoryProfile> {
    if t_min < 2 || t_max < t_min {
        return Err(invalid(format!(
            "need 2 <= t_min <= t_max, got {t_min}..{t_max}"
        )));
    }
    let s_table = (t_min..=t_max)
        .map(|t| riemann_sum(sigma2, t).map(|value| TableEntry { t, value }))
        .collect::<Result<Vec<_>>>()?;
    let c_curve = (t_min..=t_max)
        .map(|t| cycle_mass_exponent(n, d, sigma2, t).map(|value| TableEntry { t, value }))
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoryProfile {
        n,
        d,
        sigma2,
        integral: integral_i(sigma2)?,
        s_table,
        thresholds: thresholds(n, d)?,
        c_curve,
        eta: eta(sigma2)?,
        phat_bounds: phat_bounds(d, sigma2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_round_trips_through_json() {
        let p = theory_profile(1000, 6.0, 0.2, 2, 30).unwrap();
        assert_eq!(p.s_table.len(), 29);
        let s = serde_json::to_string(&p).unwrap();
        let back: TheoryProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(theory_profile(1000, 6.0, 0.2, 1, 30).is_err());
        assert!(theory_profile(1, 6.0, 0.2, 2, 30).is_err());
    }

    #[test]
    fn profile_curve_is_convex() {
        let p = theory_profile(500, 3.0, 0.05, 2, 100).unwrap();
        for w in p.c_curve.windows(3).skip(1) {
            assert!(w[2].value - 2.0 * w[1].value + w[0].value >= -1e-12);
        }
    }
}
