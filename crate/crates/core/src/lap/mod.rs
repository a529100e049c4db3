//! Linear assignment: solver strategies, the maximum-likelihood estimator
//! and an exhaustive reference.

mod brute;
mod hungarian;
mod jv;
mod ties;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

pub use brute::{brute_force_assignment, BRUTE_FORCE_MAX_N};
pub use hungarian::Hungarian;
pub use jv::JonkerVolgenant;

use crate::error::{Error, Result};
use crate::model::{cost_matrices, Instance, Permutation};

/// Reduced costs within this multiple of the largest |cost| count as tight.
const TIE_REL_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Minimize => 1.0,
            Direction::Maximize => -1.0,
        }
    }
}

/// Raw minimizing solution with dual potentials: `c[i][j] - u[i] - v[j]`
/// is non-negative up to rounding and zero on the assignment.
#[derive(Debug, Clone)]
pub struct DualSolution {
    pub assignment: Vec<usize>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// A dense square minimum-cost assignment algorithm.
pub trait AssignmentSolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// `cost` is row-major `n x n`, finite.
    fn solve_min(&self, n: usize, cost: &[f64]) -> DualSolution;
}

pub const SOLVER_NAMES: &[&str] = &["jv", "hungarian"];

pub fn solver_by_name(name: &str) -> Result<Box<dyn AssignmentSolver>> {
    match name {
        "jv" => Ok(Box::new(JonkerVolgenant)),
        "hungarian" => Ok(Box::new(Hungarian)),
        _ => Err(Error::UnknownStrategy {
            kind: "assignment solver",
            name: name.to_string(),
            known: SOLVER_NAMES.join(", "),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentSolution {
    pub assignment: Permutation,
    pub objective: f64,
    /// False when an alternative optimum was detected; the returned
    /// assignment is then the lexicographically smallest optimum.
    pub unique: bool,
}

pub(crate) fn validate_costs(cost: ArrayView2<'_, f64>) -> Result<()> {
    let (r, c) = cost.dim();
    if r != c {
        return Err(Error::DimensionMismatch(format!(
            "cost matrix is {r}x{c}, not square"
        )));
    }
    if let Some(((row, col), _)) = cost.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { row, col });
    }
    Ok(())
}

pub fn solve_assignment(
    cost: ArrayView2<'_, f64>,
    direction: Direction,
) -> Result<AssignmentSolution> {
    solve_assignment_with(&JonkerVolgenant, cost, direction)
}

pub fn solve_assignment_with(
    solver: &dyn AssignmentSolver,
    cost: ArrayView2<'_, f64>,
    direction: Direction,
) -> Result<AssignmentSolution> {
    validate_costs(cost)?;
    let n = cost.nrows();
    let sign = direction.sign();
    let c: Vec<f64> = cost.iter().map(|v| sign * v).collect();
    let DualSolution {
        mut assignment,
        u,
        v,
    } = solver.solve_min(n, &c);

    let scale = c
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let tight = ties::tight_edges(n, &c, &u, &v, TIE_REL_TOL * scale);
    let unique = !ties::has_alternative(&tight, &assignment);
    if !unique {
        ties::lex_min(&tight, &mut assignment);
    }
    let assignment = Permutation::new(assignment)
        .map_err(|_| Error::Solver(format!("{} returned an invalid assignment", solver.name())))?;
    let objective = (0..n).map(|i| cost[[i, assignment.apply(i)]]).sum();
    Ok(AssignmentSolution {
        assignment,
        objective,
        unique,
    })
}

/// The maximum-likelihood estimate: minimum total squared distance.
pub fn mle(inst: &Instance) -> Result<AssignmentSolution> {
    mle_with(&JonkerVolgenant, inst)
}

pub fn mle_with(solver: &dyn AssignmentSolver, inst: &Instance) -> Result<AssignmentSolution> {
    let costs = cost_matrices(inst);
    solve_assignment_with(solver, costs.w0.view(), Direction::Minimize)
}
