use ndarray::ArrayView2;

use super::{validate_costs, AssignmentSolution, Direction};
use crate::error::{Error, Result};
use crate::model::Permutation;

pub const BRUTE_FORCE_MAX_N: usize = 10;

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exhaustive search in lexicographic order; the first strictly better
/// permutation wins, so ties resolve to the lexicographically smallest.
pub fn brute_force_assignment(
    cost: ArrayView2<'_, f64>,
    direction: Direction,
) -> Result<AssignmentSolution> {
    validate_costs(cost)?;
    let n = cost.nrows();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            what: "brute-force assignment size",
            limit: BRUTE_FORCE_MAX_N,
            got: n,
        });
    }
    let sign = direction.sign();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_val = f64::INFINITY;
    let mut ties = 0usize;
    loop {
        let val: f64 = sign
            * perm
                .iter()
                .enumerate()
                .map(|(i, &j)| cost[[i, j]])
                .sum::<f64>();
        if val < best_val {
            best_val = val;
            best.copy_from_slice(&perm);
            ties = 1;
        } else if val == best_val {
            ties += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(AssignmentSolution {
        objective: sign * best_val,
        assignment: Permutation::new(best)?,
        unique: ties == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_in_order() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        let mut prev = p.clone();
        while next_permutation(&mut p) {
            assert!(p > prev);
            prev = p.clone();
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
