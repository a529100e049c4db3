//! Dense Jonker–Volgenant shortest augmenting path solver.

use super::{AssignmentSolver, DualSolution};

const NONE: usize = usize::MAX;

/// Jonker–Volgenant: column reduction, reduction transfer, two passes of
/// augmenting row reduction, then Dijkstra-style augmentation for the rows
/// still free.
#[derive(Debug, Default, Clone, Copy)]
pub struct JonkerVolgenant;

impl AssignmentSolver for JonkerVolgenant {
    fn name(&self) -> &'static str {
        "jv"
    }

    fn solve_min(&self, n: usize, cost: &[f64]) -> DualSolution {
        lapjv(n, cost)
    }
}

fn lapjv(n: usize, c: &[f64]) -> DualSolution {
    let at = |i: usize, j: usize| c[i * n + j];
    let mut rowsol = vec![NONE; n];
    let mut colsol = vec![NONE; n];
    let mut v = vec![0.0; n];
    if n == 0 {
        return DualSolution {
            assignment: vec![],
            u: vec![],
            v,
        };
    }

    // Column reduction, last column first.
    let mut matches = vec![0usize; n];
    for j in (0..n).rev() {
        let mut imin = 0;
        let mut min = at(0, j);
        for i in 1..n {
            if at(i, j) < min {
                min = at(i, j);
                imin = i;
            }
        }
        v[j] = min;
        matches[imin] += 1;
        if matches[imin] == 1 {
            rowsol[imin] = j;
            colsol[j] = imin;
        } else if v[j] < v[rowsol[imin]] {
            let j1 = rowsol[imin];
            rowsol[imin] = j;
            colsol[j] = imin;
            colsol[j1] = NONE;
        } else {
            colsol[j] = NONE;
        }
    }

    // Reduction transfer from assigned rows.
    let mut free = Vec::with_capacity(n);
    for i in 0..n {
        if matches[i] == 0 {
            free.push(i);
        } else if matches[i] == 1 {
            let j1 = rowsol[i];
            let mut min = f64::INFINITY;
            for j in 0..n {
                if j != j1 {
                    min = min.min(at(i, j) - v[j]);
                }
            }
            if min.is_finite() {
                v[j1] -= min;
            }
        }
    }

    // Augmenting row reduction. The step cap guards against long runs of tiny
    // price decrements; rows left over are handled by augmentation.
    let step_cap = 16 * n + 64;
    for _ in 0..2 {
        let mut k = 0;
        let mut pending = std::mem::take(&mut free);
        let mut steps = 0;
        while k < pending.len() {
            let i = pending[k];
            k += 1;
            steps += 1;
            let mut umin = at(i, 0) - v[0];
            let mut j1 = 0;
            let mut j2 = NONE;
            let mut usubmin = f64::INFINITY;
            for j in 1..n {
                let h = at(i, j) - v[j];
                if h < usubmin {
                    if h >= umin {
                        usubmin = h;
                        j2 = j;
                    } else {
                        usubmin = umin;
                        umin = h;
                        j2 = j1;
                        j1 = j;
                    }
                }
            }
            let mut i0 = colsol[j1];
            let strict = umin < usubmin;
            if strict {
                v[j1] -= usubmin - umin;
            } else if i0 != NONE && j2 != NONE {
                j1 = j2;
                i0 = colsol[j2];
            }
            if i0 != NONE && rowsol[i0] == j1 {
                rowsol[i0] = NONE;
            }
            rowsol[i] = j1;
            colsol[j1] = i;
            if i0 != NONE {
                if strict && steps < step_cap {
                    k -= 1;
                    pending[k] = i0;
                } else {
                    free.push(i0);
                }
            }
        }
        if free.is_empty() {
            break;
        }
    }

    // Shortest augmenting paths for the remaining free rows.
    let mut d = vec![0.0; n];
    let mut pred = vec![0usize; n];
    let mut collist: Vec<usize> = (0..n).collect();
    for &freerow in &free {
        for j in 0..n {
            d[j] = at(freerow, j) - v[j];
            pred[j] = freerow;
            collist[j] = j;
        }
        let mut low = 0;
        let mut up = 0;
        let mut last = 0;
        let mut min = 0.0;
        let endofpath;
        'search: loop {
            if up == low {
                last = low;
                min = d[collist[up]];
                up += 1;
                for k in up..n {
                    let j = collist[k];
                    let h = d[j];
                    if h <= min {
                        if h < min {
                            up = low;
                            min = h;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                }
                for &j in &collist[low..up] {
                    if colsol[j] == NONE {
                        endofpath = j;
                        break 'search;
                    }
                }
            }
            let j1 = collist[low];
            low += 1;
            let i = colsol[j1];
            let h = at(i, j1) - v[j1] - min;
            let mut k = up;
            while k < n {
                let j = collist[k];
                let v2 = at(i, j) - v[j] - h;
                if v2 < d[j] {
                    pred[j] = i;
                    if v2 == min {
                        if colsol[j] == NONE {
                            endofpath = j;
                            break 'search;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                    d[j] = v2;
                }
                k += 1;
            }
        }
        // Columns scanned before the final level get their prices raised.
        for &j1 in &collist[..last] {
            v[j1] += d[j1] - min;
        }
        let mut j = endofpath;
        loop {
            let i = pred[j];
            colsol[j] = i;
            let next = rowsol[i];
            rowsol[i] = j;
            j = next;
            if i == freerow {
                break;
            }
        }
    }

    let u = (0..n).map(|i| at(i, rowsol[i]) - v[rowsol[i]]).collect();
    DualSolution {
        assignment: rowsol,
        u,
        v,
    }
}
