use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest cycle length whose matching counts fit the table's integer type.
pub const MATCHING_TABLE_MAX_T: usize = 160;
/// Largest cycle length checked by subset enumeration.
pub const MATCHING_BRUTE_MAX_T: usize = 20;

/// `counts[k]` is the number of `k`-edge matchings in the cycle `C_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingTable {
    pub t: usize,
    pub counts: Vec<u128>,
}

impl MatchingTable {
    pub fn get(&self, k: usize) -> u128 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    /// `Σ_k counts[k] x^{t-2k}`.
    pub fn polynomial(&self, x: f64) -> f64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * x.powi((self.t - 2 * k) as i32))
            .sum()
    }
}

/// Counts by `M_{t,k} = M_{t-1,k} + M_{t-2,k-1}` from `C_3` and `C_4`.
pub fn matchings_on_cycle(t: usize) -> Result<MatchingTable> {
    if t < 3 {
        return Err(invalid(format!("cycle length must be >= 3, got {t}")));
    }
    if t > MATCHING_TABLE_MAX_T {
        return Err(Error::TooLarge {
            what: "matching table cycle length",
            limit: MATCHING_TABLE_MAX_T,
            got: t,
        });
    }
    let mut prev2: Vec<u128> = vec![1, 3];
    let mut prev1: Vec<u128> = vec![1, 4, 2];
    if t == 3 {
        return Ok(MatchingTable { t, counts: prev2 });
    }
    for s in 5..=t {
        let counts: Vec<u128> = (0..=s / 2)
            .map(|k| {
                let a = prev1.get(k).copied().unwrap_or(0);
                let b = if k == 0 {
                    0
                } else {
                    prev2.get(k - 1).copied().unwrap_or(0)
                };
                a + b
            })
            .collect();
        prev2 = std::mem::replace(&mut prev1, counts);
    }
    Ok(MatchingTable { t, counts: prev1 })
}

/// Counts by checking every edge subset of `C_t`.
pub fn matchings_on_cycle_brute(t: usize) -> Result<MatchingTable> {
    if !(3..=MATCHING_BRUTE_MAX_T).contains(&t) {
        return Err(invalid(format!(
            "brute force needs 3 <= t <= {MATCHING_BRUTE_MAX_T}, got {t}"
        )));
    }
    let mut counts = vec![0u128; t / 2 + 1];
    // Edge e joins vertices e and e+1 (mod t); a subset is a matching iff
    // no two cyclically adjacent edges are both chosen.
    let rotate = |mask: u32| ((mask << 1) | (mask >> (t - 1))) & ((1u32 << t) - 1);
    for mask in 0u32..(1 << t) {
        if mask & rotate(mask) == 0 {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    Ok(MatchingTable { t, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::lucas;

    #[test]
    fn small_cases() {
        let t3 = matchings_on_cycle(3).unwrap();
        assert_eq!(t3.counts, vec![1, 3]);
        let t4 = matchings_on_cycle(4).unwrap();
        assert_eq!(t4.get(2), 2);
        assert_eq!(t4.get(3), 0);
        assert!(matchings_on_cycle(2).is_err());
        assert!(matchings_on_cycle(MATCHING_TABLE_MAX_T + 1).is_err());
        assert!(matchings_on_cycle(MATCHING_TABLE_MAX_T).is_ok());
    }

    #[test]
    fn recursion_agrees_with_enumeration() {
        for t in 3..=16 {
            assert_eq!(
                matchings_on_cycle(t).unwrap(),
                matchings_on_cycle_brute(t).unwrap()
            );
        }
    }

    #[test]
    fn matching_polynomial_is_lucas() {
        for t in 3..=16usize {
            let table = matchings_on_cycle(t).unwrap();
            assert_eq!(table.get(0), 1);
            for &x in &[0.5, 1.0, 2.0, 3.0, 7.0] {
                let l = lucas(t as u32, x);
                assert!(
                    (table.polynomial(x) - l).abs() <= 1e-9 * l.abs(),
                    "t={t} x={x}"
                );
            }
        }
    }
}
