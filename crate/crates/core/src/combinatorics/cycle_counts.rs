use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

pub const EXHAUSTIVE_MAX_ELL: usize = 12;
const SAMPLE_BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    Exhaustive,
    Sampled,
}

/// Law of the number of cycles in `Q1 ∪ Q2`, where `Q1 = {{0,1}, {2,3}, ...}`
/// and `Q2` is a uniform perfect matching sharing no edge with `Q1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCountDistribution {
    pub ell: usize,
    /// `pmf[x] = P[X = x]`, for `x = 0..=ell/4`.
    pub pmf: Vec<f64>,
    pub source: CountMode,
    /// Matchings enumerated or samples drawn.
    pub samples: u64,
}

impl CycleCountDistribution {
    pub fn mgf(&self, a: f64) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(x, p)| p * a.powi(x as i32))
            .sum()
    }
}

/// Components of `Q1 ∪ Q2` given `Q2` as a partner array.
fn count_cycles(q2: &[usize]) -> usize {
    let ell = q2.len();
    let mut seen = vec![false; ell];
    let mut cycles = 0;
    for s in 0..ell {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            let w = v ^ 1;
            seen[w] = true;
            v = q2[w];
        }
    }
    cycles
}

fn enumerate(partner: &mut Vec<usize>, hist: &mut [u64]) {
    let Some(v) = partner.iter().position(|&p| p == usize::MAX) else {
        hist[count_cycles(partner)] += 1;
        return;
    };
    for u in v + 1..partner.len() {
        if partner[u] != usize::MAX || u == (v ^ 1) {
            continue;
        }
        partner[v] = u;
        partner[u] = v;
        enumerate(partner, hist);
        partner[v] = usize::MAX;
        partner[u] = usize::MAX;
    }
}

pub fn cycle_count_distribution(
    ell: usize,
    mode: CountMode,
    trials: u64,
    seed: u64,
) -> Result<CycleCountDistribution> {
    if ell < 4 || ell % 2 != 0 {
        return Err(invalid(format!("ell must be even and >= 4, got {ell}")));
    }
    let mut hist = vec![0u64; ell / 4 + 1];
    match mode {
        CountMode::Exhaustive => {
            if ell > EXHAUSTIVE_MAX_ELL {
                return Err(Error::TooLarge {
                    what: "exhaustive cycle count (ell)",
                    limit: EXHAUSTIVE_MAX_ELL,
                    got: ell,
                });
            }
            enumerate(&mut vec![usize::MAX; ell], &mut hist);
        }
        CountMode::Sampled => {
            if trials == 0 {
                return Err(invalid("sampled mode needs trials >= 1"));
            }
            let blocks = trials.div_ceil(SAMPLE_BLOCK as u64);
            let parts: Vec<Vec<u64>> = (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let mut rng = rng_from_seed(derive_seed(seed, &[b]));
                    let count = (SAMPLE_BLOCK as u64).min(trials - b * SAMPLE_BLOCK as u64);
                    let mut h = vec![0u64; ell / 4 + 1];
                    let mut order: Vec<usize> = (0..ell).collect();
                    let mut q2 = vec![0usize; ell];
                    for _ in 0..count {
                        // Rejection: uniform perfect matchings until one avoids Q1.
                        loop {
                            order.shuffle(&mut rng);
                            if order.chunks(2).all(|p| p[0] != (p[1] ^ 1)) {
                                break;
                            }
                        }
                        for p in order.chunks(2) {
                            q2[p[0]] = p[1];
                            q2[p[1]] = p[0];
                        }
                        h[count_cycles(&q2)] += 1;
                    }
                    h
                })
                .collect();
            for h in parts {
                for (acc, v) in hist.iter_mut().zip(h) {
                    *acc += v;
                }
            }
        }
    }
    let total: u64 = hist.iter().sum();
    Ok(CycleCountDistribution {
        ell,
        pmf: hist.iter().map(|&c| c as f64 / total as f64).collect(),
        source: mode,
        samples: total,
    })
}

/// `m_ℓ = E a^{X_ℓ}` from `m_0 = 1`, `m_2 = 0` and
/// `m_ℓ = a/(ℓ-3) m_{ℓ-4} + (1 - 1/(ℓ-3)) m_{ℓ-2}`.
pub fn cycle_mgf_recurrence(ell: usize, a: f64) -> Result<f64> {
    if ell % 2 != 0 {
        return Err(invalid(format!("ell must be even, got {ell}")));
    }
    let mut m = vec![1.0, 0.0];
    for half in 2..=ell / 2 {
        let l = (2 * half) as f64;
        let next = a / (l - 3.0) * m[half - 2] + (1.0 - 1.0 / (l - 3.0)) * m[half - 1];
        m.push(next);
    }
    Ok(m[ell / 2])
}

fn double_factorial(k: usize) -> f64 {
    (1..=k).rev().step_by(2).map(|v| v as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MgfBoundCheck {
    pub ell: usize,
    pub a: f64,
    /// `m_ℓ` from the recurrence.
    pub lhs: f64,
    /// `(φ² a)^{ℓ/4} / (ℓ/2)!!`.
    pub rhs: f64,
    /// `(e³ a / ℓ)^{ℓ/4}`.
    pub rhs_coarse: f64,
    pub ok: bool,
}

pub fn cycle_mgf_bound_check(ell: usize, a: f64) -> Result<MgfBoundCheck> {
    if ell < 4 || ell % 2 != 0 {
        return Err(invalid(format!("ell must be even and >= 4, got {ell}")));
    }
    if !(a >= ell as f64) {
        return Err(invalid(format!(
            "the bound needs a >= ell, got a={a} ell={ell}"
        )));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let lhs = cycle_mgf_recurrence(ell, a)?;
    let q = ell as f64 / 4.0;
    let rhs = (phi * phi * a).powf(q) / double_factorial(ell / 2);
    let rhs_coarse = (3f64.exp() * a / ell as f64).powf(q);
    Ok(MgfBoundCheck {
        ell,
        a,
        lhs,
        rhs,
        rhs_coarse,
        ok: lhs <= rhs,
    })
}
