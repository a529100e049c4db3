use super::{AssignmentSolver, DualSolution};

/// O(n^3) Hungarian method with row-by-row potentials.
#[derive(Debug, Default, Clone, Copy)]
pub struct Hungarian;

impl AssignmentSolver for Hungarian {
    fn name(&self) -> &'static str {
        "hungarian"
    }

    fn solve_min(&self, n: usize, c: &[f64]) -> DualSolution {
        // Index 0 is a sentinel column; rows and columns are 1-based inside.
        let mut u = vec![0.0; n + 1];
        let mut v = vec![0.0; n + 1];
        let mut p = vec![0usize; n + 1];
        let mut way = vec![0usize; n + 1];
        let mut minv = vec![0.0; n + 1];
        let mut used = vec![false; n + 1];
        for i in 1..=n {
            p[0] = i;
            let mut j0 = 0;
            minv.fill(f64::INFINITY);
            used.fill(false);
            loop {
                used[j0] = true;
                let i0 = p[j0];
                let mut delta = f64::INFINITY;
                let mut j1 = 0;
                for j in 1..=n {
                    if used[j] {
                        continue;
                    }
                    let cur = c[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=n {
                    if used[j] {
                        u[p[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
                if p[j0] == 0 {
                    break;
                }
            }
            loop {
                let j1 = way[j0];
                p[j0] = p[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }
        let mut assignment = vec![0; n];
        for j in 1..=n {
            assignment[p[j] - 1] = j - 1;
        }
        DualSolution {
            assignment,
            u: u[1..].to_vec(),
            v: v[1..].to_vec(),
        }
    }
}
