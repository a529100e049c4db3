//! Multinomial entropy and the second-moment rate function `F`.

use serde::{Deserialize, Serialize};

use super::riemann::{integral_i, riemann_sum};
use crate::error::{invalid, Result};

/// Additive constant in both rates.
pub const RATE_K: f64 = 50.0;

const SUM_SLACK: f64 = 1e-12;

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `H(x₁..x_k) = -Σ xᵢ ln xᵢ - (1 - Σxᵢ) ln(1 - Σxᵢ)`; the last category is
/// implicit.
pub fn entropy_h(args: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &x in args {
        if !(x >= 0.0) {
            return Err(invalid(format!("entropy arguments must be >= 0, got {x}")));
        }
        total += x;
    }
    if total > 1.0 + SUM_SLACK {
        return Err(invalid(format!("entropy arguments sum to {total} > 1")));
    }
    let rest = (1.0 - total).max(0.0);
    Ok(-args.iter().map(|&x| xlogx(x)).sum::<f64>() - xlogx(rest))
}

/// A point `(ā, b̄, c̄, j̄, k̄, ℓ̄)` of the constraint set.
pub type RatePoint = [f64; 6];

/// `2ā + b̄ + 2c̄ + j̄ + k̄ + ℓ̄`.
pub fn constraint_load(x: &RatePoint) -> f64 {
    2.0 * x[0] + x[1] + 2.0 * x[2] + x[3] + x[4] + x[5]
}

pub fn is_feasible(x: &RatePoint) -> bool {
    x.iter().all(|&v| (0.0..=1.0).contains(&v)) && constraint_load(x) <= 1.0 + SUM_SLACK
}

/// `F(x) = 7H(ā, ā, b̄, c̄, c̄, j̄, k̄, ℓ̄) + (ā + b̄ + c̄ + j̄ + k̄ + ℓ̄)·rate`
/// with `rate = R₁ ∨ R₂`. `None` outside the constraint set.
pub fn rate_function_f(x: &RatePoint, rate: f64) -> Option<f64> {
    if !is_feasible(x) {
        return None;
    }
    let [a, b, c, j, k, l] = *x;
    let h = entropy_h(&[a, a, b, c, c, j, k, l]).ok()?;
    Some(7.0 * h + x.iter().sum::<f64>() * rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupF {
    pub value: f64,
    pub argmax: RatePoint,
}

const GRID_POINTS: usize = 20;
const REFINE_ROUNDS: usize = 3;

/// Supremum of `F` over the constraint set: a 20-point grid per axis
/// (pruned to feasible points), then compass-search refinement rounds with
/// steps shrinking by a factor of 10 per round.
pub fn sup_f(rate: f64) -> SupF {
    let h = 1.0 / (GRID_POINTS - 1) as f64;
    let mut best = SupF {
        value: 0.0,
        argmax: [0.0; 6],
    };
    let steps = GRID_POINTS - 1;
    // Integer loads keep the pruning exact: 2a + b + 2c + j + k + l <= steps.
    for a in 0..=steps / 2 {
        for c in 0..=(steps - 2 * a) / 2 {
            let r1 = steps - 2 * a - 2 * c;
            for b in 0..=r1 {
                for j in 0..=(r1 - b) {
                    for k in 0..=(r1 - b - j) {
                        for l in 0..=(r1 - b - j - k) {
                            let x = [a, b, c, j, k, l].map(|v| v as f64 * h);
                            if let Some(v) = rate_function_f(&x, rate) {
                                if v > best.value {
                                    best = SupF {
                                        value: v,
                                        argmax: x,
                                    };
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut step = h;
    for _ in 0..REFINE_ROUNDS {
        compass_search(&mut best, rate, step, step * 1e-3);
        step *= 0.1;
    }
    best
}

fn compass_search(best: &mut SupF, rate: f64, mut step: f64, min_step: f64) {
    while step >= min_step {
        let mut improved = false;
        for axis in 0..6 {
            for dir in [1.0, -1.0] {
                let mut x = best.argmax;
                x[axis] = (x[axis] + dir * step).max(0.0);
                if let Some(v) = rate_function_f(&x, rate) {
                    if v > best.value {
                        *best = SupF {
                            value: v,
                            argmax: x,
                        };
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
}

/// Parameters of the second-moment rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateInputs {
    pub n: f64,
    pub nprime: f64,
    pub d: f64,
    pub sigma2: f64,
    /// Grouping size.
    pub r: f64,
    /// Target matching size.
    pub m: f64,
    /// Edge probability.
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentRates {
    pub r1: f64,
    pub r2: f64,
    pub sup_f: SupF,
}

fn log_plus(x: f64) -> f64 {
    x.ln().max(0.0)
}

/// `R₁ = K + ln(n'²/(p n² m))`,
/// `R₂ = K + d(S(σ², 2) - I(σ²)) + 4 log₊(d/(1+σ²)) - 2 ln r`, and sup F.
pub fn second_moment_rates(inp: &RateInputs) -> Result<SecondMomentRates> {
    if !(inp.p > 0.0 && inp.p <= 1.0) {
        return Err(invalid(format!(
            "edge probability must lie in (0, 1], got {}",
            inp.p
        )));
    }
    for (name, v) in [
        ("n", inp.n),
        ("nprime", inp.nprime),
        ("d", inp.d),
        ("r", inp.r),
        ("m", inp.m),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let r1 = RATE_K + (inp.nprime * inp.nprime / (inp.p * inp.n * inp.n * inp.m)).ln();
    let r2 = RATE_K
        + inp.d * (riemann_sum(inp.sigma2, 2)? - integral_i(inp.sigma2)?)
        + 4.0 * log_plus(inp.d / (1.0 + inp.sigma2))
        - 2.0 * inp.r.ln();
    Ok(SecondMomentRates {
        r1,
        r2,
        sup_f: sup_f(r1.max(r2)),
    })
}
