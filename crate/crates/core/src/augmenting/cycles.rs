use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest `n` for which cycles of every length may be enumerated.
pub const ENUMERATION_MAX_N: usize = 12;

/// A directed cycle `i_1 -> i_2 -> ... -> i_t -> i_1` and its margin
/// `sum_k W[i_k][i_{k+1}] - sum_k W[i_k][i_k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub vertices: Vec<usize>,
    pub margin: f64,
}

impl CycleWitness {
    pub fn is_augmenting(&self) -> bool {
        self.margin >= 0.0
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn check_square(w: ArrayView2<'_, f64>) -> Result<usize> {
    let (r, c) = w.dim();
    if r != c {
        return Err(Error::DimensionMismatch(format!(
            "weight matrix is {r}x{c}"
        )));
    }
    Ok(r)
}

pub fn is_augmenting(w: ArrayView2<'_, f64>, cycle: &[usize]) -> Result<CycleWitness> {
    let n = check_square(w)?;
    if cycle.len() < 2 {
        return Err(invalid(format!(
            "a cycle needs at least 2 vertices, got {}",
            cycle.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n {
            return Err(invalid(format!("vertex {v} out of range for n={n}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(invalid(format!("vertex {v} repeated in cycle")));
        }
    }
    let t = cycle.len();
    let margin = (0..t)
        .map(|k| w[[cycle[k], cycle[(k + 1) % t]]] - w[[cycle[k], cycle[k]]])
        .sum();
    Ok(CycleWitness {
        vertices: cycle.to_vec(),
        margin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleEnumeration {
    pub cycles: Vec<CycleWitness>,
    /// Set when `limit` stopped the search early.
    pub truncated: bool,
}

impl CycleEnumeration {
    /// Total number of vertices over all listed cycles.
    pub fn mass(&self) -> usize {
        self.cycles.iter().map(CycleWitness::len).sum()
    }
}

struct Search<'a> {
    w: ArrayView2<'a, f64>,
    n: usize,
    t_max: usize,
    limit: usize,
    path: Vec<usize>,
    used: Vec<bool>,
    out: Vec<CycleWitness>,
    truncated: bool,
}

impl Search<'_> {
    /// `forward` is the sum of path edges, `diag` the sum of diagonal terms.
    fn extend(&mut self, forward: f64, diag: f64) {
        let start = self.path[0];
        let last = *self.path.last().unwrap();
        if self.path.len() >= 2 {
            let margin = forward + self.w[[last, start]] - diag;
            if margin >= 0.0 {
                if self.out.len() == self.limit {
                    self.truncated = true;
                    return;
                }
                self.out.push(CycleWitness {
                    vertices: self.path.clone(),
                    margin,
                });
            }
        }
        if self.path.len() == self.t_max {
            return;
        }
        for v in start + 1..self.n {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.path.push(v);
            self.extend(forward + self.w[[last, v]], diag + self.w[[v, v]]);
            self.path.pop();
            self.used[v] = false;
            if self.truncated {
                return;
            }
        }
    }
}

/// Every augmenting directed cycle of length `2..=t_max`, each listed once
/// starting from its smallest vertex. Both orientations of a cycle of
/// length at least three are tested separately.
pub fn enumerate_augmenting_cycles(
    w: ArrayView2<'_, f64>,
    t_max: usize,
    limit: Option<usize>,
) -> Result<CycleEnumeration> {
    let n = check_square(w)?;
    if t_max < 2 {
        return Err(invalid(format!("t_max must be >= 2, got {t_max}")));
    }
    if n > ENUMERATION_MAX_N && t_max > 3 {
        return Err(Error::TooLarge {
            what: "cycle enumeration beyond length 3 (n)",
            limit: ENUMERATION_MAX_N,
            got: n,
        });
    }
    let mut search = Search {
        w,
        n,
        t_max: t_max.min(n),
        limit: limit.unwrap_or(usize::MAX),
        path: Vec::with_capacity(t_max),
        used: vec![false; n],
        out: Vec::new(),
        truncated: false,
    };
    for s in 0..n {
        search.used[s] = true;
        search.path.push(s);
        search.extend(0.0, w[[s, s]]);
        search.path.pop();
        search.used[s] = false;
        if search.truncated {
            break;
        }
    }
    Ok(CycleEnumeration {
        cycles: search.out,
        truncated: search.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};
    use rand::Rng;

    #[test]
    fn hand_matrix_transposition() {
        let w = array![[0.0, 1.0], [1.0, 0.0]];
        let c = is_augmenting(w.view(), &[0, 1]).unwrap();
        assert_eq!(c.margin, 2.0);
        assert!(c.is_augmenting());
        let all = enumerate_augmenting_cycles(w.view(), 2, None).unwrap();
        assert_eq!(all.cycles.len(), 1);
        assert_eq!(all.cycles[0].vertices, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_cycles() {
        let w = Array2::<f64>::zeros((3, 3));
        assert!(is_augmenting(w.view(), &[0]).is_err());
        assert!(is_augmenting(w.view(), &[0, 1, 0]).is_err());
        assert!(is_augmenting(w.view(), &[0, 3]).is_err());
        let big = Array2::<f64>::zeros((13, 13));
        assert!(enumerate_augmenting_cycles(big.view(), 4, None).is_err());
        assert!(enumerate_augmenting_cycles(big.view(), 3, None).is_ok());
    }

    #[test]
    fn counts_every_directed_cycle_once() {
        // With an all-zero matrix every cycle has margin zero.
        for n in 2..=7usize {
            let w = Array2::<f64>::zeros((n, n));
            let got = enumerate_augmenting_cycles(w.view(), n, None).unwrap();
            // Directed cycles of length t on n labelled vertices: C(n, t) (t-1)!.
            let mut want = 0usize;
            for t in 2..=n {
                let choose: usize =
                    (0..t).map(|k| n - k).product::<usize>() / (1..=t).product::<usize>();
                let arrangements: usize = if t == 2 { 1 } else { (1..t).product() };
                want += choose * arrangements;
            }
            assert_eq!(got.cycles.len(), want, "n={n}");
        }
    }

    #[test]
    fn limit_truncates() {
        let w = Array2::<f64>::zeros((5, 5));
        let got = enumerate_augmenting_cycles(w.view(), 5, Some(7)).unwrap();
        assert_eq!(got.cycles.len(), 7);
        assert!(got.truncated);
        let all = enumerate_augmenting_cycles(w.view(), 5, None).unwrap();
        assert!(!all.truncated);
    }

    #[test]
    fn enumeration_agrees_with_direct_margins() {
        let mut rng = crate::rng::rng_from_seed(3);
        let n = 6;
        let w = Array2::from_shape_simple_fn((n, n), || rng.random_range(-1.0..1.0));
        let got = enumerate_augmenting_cycles(w.view(), n, None).unwrap();
        for c in &got.cycles {
            let direct = is_augmenting(w.view(), &c.vertices).unwrap();
            assert!((direct.margin - c.margin).abs() < 1e-12);
            assert!(c.is_augmenting());
            assert_eq!(c.vertices[0], *c.vertices.iter().min().unwrap());
        }
    }
}
