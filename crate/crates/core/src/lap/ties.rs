//! Detection and canonical resolution of alternative optima using the
//! dual certificate returned by a solver.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Tight edges per row, ascending by column: reduced cost within `tol`.
pub(super) fn tight_edges(n: usize, c: &[f64], u: &[f64], v: &[f64], tol: f64) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| c[i * n + j] - u[i] - v[j] <= tol)
                .collect()
        })
        .collect()
}

/// True when the tight subgraph admits an alternating cycle, i.e. a second
/// optimal assignment exists.
pub(super) fn has_alternative(tight: &[Vec<usize>], assign: &[usize]) -> bool {
    let n = assign.len();
    let mut owner = vec![NONE; n];
    for (i, &j) in assign.iter().enumerate() {
        owner[j] = i;
    }
    // Rows linked i -> owner[j] for tight non-assigned (i, j).
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            tight[i]
                .iter()
                .filter(|&&j| j != assign[i])
                .map(|&j| owner[j])
                .collect()
        })
        .collect();
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(top) = stack.len().checked_sub(1) {
            let (node, next) = stack[top];
            if next < succ[node].len() {
                stack[top].1 += 1;
                let to = succ[node][next];
                match state[to] {
                    0 => {
                        state[to] = 1;
                        stack.push((to, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                state[node] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Rewrites `assign` into the lexicographically smallest perfect matching
/// of the tight subgraph. Row by row, the smallest column reachable by an
/// alternating cycle through unfixed rows is taken.
pub(super) fn lex_min(tight: &[Vec<usize>], assign: &mut [usize]) {
    let n = assign.len();
    let mut owner = vec![NONE; n];
    for (i, &j) in assign.iter().enumerate() {
        owner[j] = i;
    }
    let mut parent = vec![NONE; n];
    let mut via = vec![NONE; n];
    for i in 0..n {
        for &j in &tight[i] {
            if j >= assign[i] {
                break;
            }
            let r = owner[j];
            if r < i {
                continue;
            }
            // Search rows > i for an alternating path from r to assign[i]
            // that avoids column j.
            let target = assign[i];
            parent.fill(NONE);
            via.fill(NONE);
            parent[r] = r;
            let mut queue = VecDeque::from([r]);
            let mut end = None;
            'bfs: while let Some(a) = queue.pop_front() {
                for &col in &tight[a] {
                    if col == j || col == assign[a] {
                        continue;
                    }
                    if col == target {
                        end = Some((a, col));
                        break 'bfs;
                    }
                    let b = owner[col];
                    if b > i && parent[b] == NONE {
                        parent[b] = a;
                        via[b] = col;
                        queue.push_back(b);
                    }
                }
            }
            if let Some((mut a, mut col)) = end {
                loop {
                    assign[a] = col;
                    owner[col] = a;
                    if a == r {
                        break;
                    }
                    col = via[a];
                    a = parent[a];
                }
                assign[i] = j;
                owner[j] = i;
                break;
            }
        }
    }
}
