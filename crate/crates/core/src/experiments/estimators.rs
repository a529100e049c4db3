//! Estimators run on each sweep trial, selected by name.

use std::sync::OnceLock;

use crate::augmenting::lower_bound_from;
use crate::error::{Error, Result};
use crate::greedy::{greedy, GreedyVariant};
use crate::lap::{mle, AssignmentSolution};
use crate::model::{error_report, Instance};

/// Shared per-trial state, so estimators that need the MLE solve it once.
pub struct TrialContext<'a> {
    pub inst: &'a Instance,
    mle: OnceLock<AssignmentSolution>,
}

impl<'a> TrialContext<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        Self {
            inst,
            mle: OnceLock::new(),
        }
    }

    pub fn mle(&self) -> Result<&AssignmentSolution> {
        if let Some(sol) = self.mle.get() {
            return Ok(sol);
        }
        let sol = mle(self.inst)?;
        Ok(self.mle.get_or_init(|| sol))
    }
}

/// What an estimator reports for one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOutput {
    pub error_count: usize,
    /// Maximum matching size of the augmenting-pair graph.
    pub m: Option<usize>,
}

pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &TrialContext<'_>) -> Result<EstimatorOutput>;
}

pub struct Mle;

impl Estimator for Mle {
    fn name(&self) -> &'static str {
        "mle"
    }

    fn run(&self, ctx: &TrialContext<'_>) -> Result<EstimatorOutput> {
        let sol = ctx.mle()?;
        let report = error_report(&sol.assignment, &ctx.inst.planted)?;
        Ok(EstimatorOutput {
            error_count: report.error_count,
            m: None,
        })
    }
}

pub struct Greedy(pub GreedyVariant);

impl Estimator for Greedy {
    fn name(&self) -> &'static str {
        match self.0 {
            GreedyVariant::Distance => "greedy_distance",
            GreedyVariant::InnerProduct => "greedy_inner",
        }
    }

    fn run(&self, ctx: &TrialContext<'_>) -> Result<EstimatorOutput> {
        let report = greedy(ctx.inst, self.0)?;
        Ok(EstimatorOutput {
            error_count: report.error_count,
            m: None,
        })
    }
}

/// Reports `M` itself as the error count: the smallest error count the MLE
/// could have given the augmenting pairs present.
pub struct AugMatchingLowerBound;

impl Estimator for AugMatchingLowerBound {
    fn name(&self) -> &'static str {
        "aug_matching_lower_bound"
    }

    fn run(&self, ctx: &TrialContext<'_>) -> Result<EstimatorOutput> {
        let lb = lower_bound_from(ctx.inst, ctx.mle()?)?;
        Ok(EstimatorOutput {
            error_count: lb.m,
            m: Some(lb.m),
        })
    }
}

pub const ESTIMATOR_NAMES: &[&str] = &[
    "mle",
    "greedy_distance",
    "greedy_inner",
    "aug_matching_lower_bound",
];

pub fn estimator_by_name(name: &str) -> Result<Box<dyn Estimator>> {
    match name {
        "mle" => Ok(Box::new(Mle)),
        "greedy_distance" => Ok(Box::new(Greedy(GreedyVariant::Distance))),
        "greedy_inner" => Ok(Box::new(Greedy(GreedyVariant::InnerProduct))),
        "aug_matching_lower_bound" => Ok(Box::new(AugMatchingLowerBound)),
        _ => Err(Error::UnknownStrategy {
            kind: "estimator",
            name: name.to_string(),
            known: ESTIMATOR_NAMES.join(", "),
        }),
    }
}
