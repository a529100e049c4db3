//! The analytic and combinatorial identity suite behind `planted verify`.
//!
//! Each check compares two independent routes to the same quantity and
//! reports the worst discrepancy it saw.

use serde::Serialize;

use crate::combinatorics::{
    cycle_count_distribution, cycle_mgf_bound_check, cycle_mgf_recurrence, forest_counts_exact,
    matchings_on_cycle, matchings_on_cycle_brute, CountMode, EXHAUSTIVE_MAX_ELL,
};
use crate::error::Result;
use crate::quadrature::integrate;
use crate::theory::{
    cycle_edges, cycle_spectrum, eta, integral_i, laplacian, ln_increment_gap, ln_upper_gap, lucas,
    path_edges, path_spectrum, riemann_f, riemann_sum, riemann_sum_via_lucas, sorted_eigenvalues,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Set when the check is expected to fail; the text says why.
    pub known_deviation: Option<&'static str>,
}

impl IdentityCheck {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
            known_deviation: None,
        }
    }

    /// Failing checks that are not documented deviations.
    pub fn is_unexpected_failure(&self) -> bool {
        !self.passed && self.known_deviation.is_none()
    }
}

/// `count` log-spaced points on `[10^lo, 10^hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (count - 1) as f64))
        .collect()
}

pub const INTEGRAL_TOL: f64 = 1e-10;
pub const LUCAS_REL_TOL: f64 = 1e-9;
pub const SPECTRUM_TOL: f64 = 1e-9;
pub const RIEMANN_T_MAX: u32 = 200;

pub fn check_integral_closed_form() -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for s2 in log_grid(-3.0, 3.0, 50) {
        let (q, _) = integrate(|x| riemann_f(s2, x).unwrap_or(f64::NAN), 0.0, 1.0, 1e-12);
        worst = worst.max((q - integral_i(s2)?).abs());
    }
    Ok(IdentityCheck::new(
        "integral_closed_form_vs_quadrature",
        worst <= INTEGRAL_TOL,
        format!("50 sigma2 points, max abs diff {worst:.3e} (tol {INTEGRAL_TOL:.0e})"),
    ))
}

pub fn check_lucas_identity() -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for s2 in log_grid(-3.0, 3.0, 25) {
        for t in 3..=RIEMANN_T_MAX {
            let direct = riemann_sum(s2, t)?;
            let via = riemann_sum_via_lucas(s2, t)?;
            worst = worst.max((via - direct).abs() / direct.abs());
        }
    }
    Ok(IdentityCheck::new(
        "lucas_identity",
        worst <= LUCAS_REL_TOL,
        format!("t = 3..{RIEMANN_T_MAX}, max rel diff {worst:.3e} (tol {LUCAS_REL_TOL:.0e})"),
    ))
}

/// Increments `S(t) - S(t-1)` stay above `I` and strictly decrease.
pub fn check_riemann_increments() -> Result<IdentityCheck> {
    let mut failures = Vec::new();
    for s2 in log_grid(-3.0, 3.0, 25) {
        let mut prev = f64::INFINITY;
        for t in 3..=RIEMANN_T_MAX {
            let g = ln_increment_gap(s2, t)?;
            if !(g.is_finite() && g < prev) {
                failures.push(format!("sigma2={s2:.3e} t={t}"));
            }
            prev = g;
        }
    }
    Ok(IdentityCheck::new(
        "riemann_increments_monotone",
        failures.is_empty(),
        if failures.is_empty() {
            format!("t = 3..{RIEMANN_T_MAX} on 25 sigma2 points")
        } else {
            format!("violations: {}", failures.join(", "))
        },
    ))
}

/// `S(σ², t) < t·I(σ²)` strictly.
pub fn check_riemann_upper() -> Result<IdentityCheck> {
    let mut failures = Vec::new();
    for s2 in log_grid(-3.0, 3.0, 25) {
        for t in 2..=RIEMANN_T_MAX {
            if !ln_upper_gap(s2, t)?.is_finite() {
                failures.push(format!("sigma2={s2:.3e} t={t}"));
            }
        }
    }
    Ok(IdentityCheck::new(
        "riemann_upper_strict",
        failures.is_empty(),
        if failures.is_empty() {
            format!("t = 2..{RIEMANN_T_MAX} on 25 sigma2 points")
        } else {
            format!("violations: {}", failures.join(", "))
        },
    ))
}

/// `η₂ ≤ η₁ ≤ η₃ ≤ 3/(2 + 8σ²)`, with the closed forms matched against
/// their Riemann-sum definitions.
pub fn check_eta() -> Result<IdentityCheck> {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for s2 in log_grid(-3.0, 3.0, 40) {
        let e = eta(s2)?;
        let s = |t| riemann_sum(s2, t);
        let i = integral_i(s2)?;
        worst = worst
            .max((e.eta1 - (0.75 * s(2)? - 0.25 * s(4)?)).abs())
            .max((e.eta2 - (s(2)? - 0.5 * s(3)?)).abs())
            .max((e.eta3 - 0.5 * (s(2)? - i)).abs());
        if !(e.eta2 <= e.eta1 && e.eta1 <= e.eta3 && e.eta3 <= 3.0 / (2.0 + 8.0 * s2)) {
            failures.push(format!("sigma2={s2:.3e}"));
        }
    }
    Ok(IdentityCheck::new(
        "eta_ordering_and_bound",
        failures.is_empty() && worst < 1e-12,
        format!(
            "40 sigma2 points, closed form max diff {worst:.3e}, ordering violations {}",
            failures.len()
        ),
    ))
}

pub fn check_laplacian_spectra() -> Result<IdentityCheck> {
    let mut worst = 0.0f64;
    for t in 2..=12usize {
        let p = sorted_eigenvalues(laplacian(t, &path_edges(t)));
        for (a, b) in p.iter().zip(path_spectrum(t)) {
            worst = worst.max((a - b).abs());
        }
        if t >= 3 {
            let c = sorted_eigenvalues(laplacian(t, &cycle_edges(t)));
            for (a, b) in c.iter().zip(cycle_spectrum(t)) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(IdentityCheck::new(
        "laplacian_spectra",
        worst <= SPECTRUM_TOL,
        format!("paths and cycles t <= 12, max abs diff {worst:.3e}"),
    ))
}

pub fn analytic_checks() -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        check_integral_closed_form()?,
        check_lucas_identity()?,
        check_riemann_increments()?,
        check_riemann_upper()?,
        check_eta()?,
        check_laplacian_spectra()?,
    ])
}

/// Recursion against enumeration, then the polynomial against Lucas values.
pub fn check_matching_polynomial() -> Result<IdentityCheck> {
    let mut failures = Vec::new();
    for t in 3..=16usize {
        let table = matchings_on_cycle(t)?;
        if table != matchings_on_cycle_brute(t)? {
            failures.push(format!("t={t} counts"));
        }
        for x in [0.5, 1.0, 2.0, 3.0, 7.0] {
            let l = lucas(t as u32, x);
            if (table.polynomial(x) - l).abs() > 1e-9 * l.abs() {
                failures.push(format!("t={t} x={x}"));
            }
        }
    }
    Ok(IdentityCheck::new(
        "matching_polynomial_is_lucas",
        failures.is_empty(),
        if failures.is_empty() {
            "t = 3..16".to_string()
        } else {
            failures.join(", ")
        },
    ))
}

pub fn check_forest_bijection() -> Result<IdentityCheck> {
    let mut failures = Vec::new();
    for t in 3..=8usize {
        let forests = forest_counts_exact(t)?;
        let doubled = matchings_on_cycle(2 * t)?;
        for (k, &f) in forests.iter().enumerate().take(t) {
            if f < 0 || f as u128 != doubled.get(k) {
                failures.push(format!("t={t} k={k}: {f} vs {}", doubled.get(k)));
            }
        }
    }
    Ok(IdentityCheck::new(
        "forest_matching_bijection",
        failures.is_empty(),
        if failures.is_empty() {
            "E_k = M_{2t,k} exactly for t = 3..8".to_string()
        } else {
            failures.join(", ")
        },
    ))
}

pub fn check_x4_is_one() -> Result<IdentityCheck> {
    let dist = cycle_count_distribution(4, CountMode::Exhaustive, 0, 0)?;
    Ok(IdentityCheck::new(
        "x4_always_one",
        dist.pmf.get(1) == Some(&1.0) && dist.pmf.iter().sum::<f64>() == 1.0,
        format!("pmf {:?} over {} matchings", dist.pmf, dist.samples),
    ))
}

pub const MGF_RECURRENCE_DEVIATION: &str =
    "the three-term recurrence disagrees with exhaustive counts at ell = 6, 10, 12; \
     e.g. E a^X6 = a exactly while the recurrence gives 2a/3";

const MGF_POINTS: [f64; 5] = [1.0, 2.0, 5.0, 12.0, 40.0];

pub fn check_mgf_recurrence() -> Result<IdentityCheck> {
    let mut mismatches = Vec::new();
    for ell in (4..=EXHAUSTIVE_MAX_ELL).step_by(2) {
        let dist = cycle_count_distribution(ell, CountMode::Exhaustive, 0, 0)?;
        for a in MGF_POINTS {
            let exact = dist.mgf(a);
            let rec = cycle_mgf_recurrence(ell, a)?;
            if (exact - rec).abs() > 1e-12 * exact.abs().max(1.0) {
                mismatches.push(format!("ell={ell} a={a}: {exact:.6} vs {rec:.6}"));
            }
        }
    }
    let mut check = IdentityCheck::new(
        "cycle_mgf_recurrence",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "ell = 4..12".to_string()
        } else {
            format!("{} mismatches, first: {}", mismatches.len(), mismatches[0])
        },
    );
    check.known_deviation = Some(MGF_RECURRENCE_DEVIATION);
    Ok(check)
}

pub fn check_mgf_bound() -> Result<IdentityCheck> {
    let mut failures = Vec::new();
    let mut count = 0;
    for ell in (4..=EXHAUSTIVE_MAX_ELL).step_by(2) {
        let dist = cycle_count_distribution(ell, CountMode::Exhaustive, 0, 0)?;
        for mult in [1.0, 1.5, 2.0, 5.0, 20.0, 100.0] {
            let a = mult * ell as f64;
            let bound = cycle_mgf_bound_check(ell, a)?.rhs;
            count += 1;
            if dist.mgf(a) > bound {
                failures.push(format!("ell={ell} a={a}"));
            }
        }
    }
    Ok(IdentityCheck::new(
        "cycle_mgf_bound",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{count} (ell, a) points with a >= ell, exhaustive law")
        } else {
            failures.join(", ")
        },
    ))
}

pub fn combinatorial_checks() -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        check_matching_polynomial()?,
        check_forest_bijection()?,
        check_x4_is_one()?,
        check_mgf_recurrence()?,
        check_mgf_bound()?,
    ])
}

pub fn all_checks() -> Result<Vec<IdentityCheck>> {
    let mut out = analytic_checks()?;
    out.extend(combinatorial_checks()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_apart_from_documented_deviations() {
        let checks = all_checks().unwrap();
        assert_eq!(checks.len(), 11);
        for c in &checks {
            assert!(!c.is_unexpected_failure(), "{}: {}", c.name, c.detail);
        }
        let rec = checks
            .iter()
            .find(|c| c.name == "cycle_mgf_recurrence")
            .unwrap();
        assert!(!rec.passed, "recurrence now matches; drop the deviation");
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(-3.0, 3.0, 50);
        assert_eq!(g.len(), 50);
        assert!((g[0] - 1e-3).abs() < 1e-18 && (g[49] - 1e3).abs() < 1e-9);
    }
}
