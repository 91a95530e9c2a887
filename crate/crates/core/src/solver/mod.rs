//! Exact optimization over 0-1 strategies.
//!
//! All solvers share one search space: every facility is either skipped or
//! activated with one affordable `(location, period)` option. Objective
//! values of a strategy are always accumulated in facility order, so the
//! branch and bound, the brute force and the enumerators agree bit for bit.

mod bnb;
mod brute;
mod model;
mod pareto;

use serde::{Deserialize, Serialize};

use crate::dashboard::{DashboardObjective, StakeholderSet};
use crate::error::{Error, Result};
use crate::instance::{ProblemInstance, Strategy};

pub use bnb::{solve, solve_audited, AuditReport};
pub use brute::{brute_force, candidate_count, BRUTE_FORCE_LIMIT};
pub use pareto::{count_region, enumerate_nondominated, NondominatedPoint};

/// Absolute slack used when comparing constraint activity to its bound.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    #[default]
    Max,
    Min,
}

/// A linear function of the decision variables: one coefficient per `x_ilt`
/// for `t` in `0..p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearObjective {
    dims: (usize, usize, usize),
    coefficients: Vec<f64>,
    sense: Sense,
}

impl LinearObjective {
    pub fn new(instance: &ProblemInstance, coefficients: Vec<f64>, sense: Sense) -> Result<Self> {
        let dims = (instance.num_facilities(), instance.num_locations(), instance.horizon());
        let expected = dims.0 * dims.1 * dims.2;
        if coefficients.len() != expected {
            return Err(Error::IndexOutOfRange(format!(
                "objective has {} coefficients, expected {expected}",
                coefficients.len()
            )));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::IndexOutOfRange(format!(
                "objective coefficient {c} is not finite"
            )));
        }
        Ok(Self {
            dims,
            coefficients,
            sense,
        })
    }

    /// Builds the coefficient grid from `f(i, l, t)`.
    pub fn from_fn(instance: &ProblemInstance, sense: Sense, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let (n, m, p) = (instance.num_facilities(), instance.num_locations(), instance.horizon());
        let mut coefficients = Vec::with_capacity(n * m * p);
        for i in 0..n {
            for l in 0..m {
                for t in 0..p {
                    coefficients.push(f(i, l, t));
                }
            }
        }
        Self {
            dims: (n, m, p),
            coefficients,
            sense,
        }
    }

    pub fn coefficient(&self, i: usize, l: usize, t: usize) -> f64 {
        let (_, m, p) = self.dims;
        self.coefficients[(i * m + l) * p + t]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    /// Sum of coefficients of the activations, in activation order.
    pub fn value(&self, strategy: &Strategy) -> f64 {
        strategy
            .activations()
            .iter()
            .fold(0.0, |acc, a| acc + self.coefficient(a.facility, a.location, a.period))
    }

    pub(crate) fn check_dims(&self, instance: &ProblemInstance) -> Result<()> {
        if self.dims != (instance.num_facilities(), instance.num_locations(), instance.horizon()) {
            return Err(Error::IndexOutOfRange(format!(
                "objective built for {:?}, instance has shape {:?}",
                self.dims,
                (instance.num_facilities(), instance.num_locations(), instance.horizon())
            )));
        }
        Ok(())
    }

    /// Coefficients oriented so that larger is better.
    pub(crate) fn gains(&self) -> Vec<f64> {
        match self.sense {
            Sense::Max => self.coefficients.clone(),
            Sense::Min => self.coefficients.iter().map(|c| -c).collect(),
        }
    }
}

/// Turns one dashboard cell into the equivalent linear objective.
pub fn linearize(
    instance: &ProblemInstance,
    objective: &DashboardObjective,
    stakeholders: Option<&StakeholderSet>,
) -> Result<LinearObjective> {
    objective.check(instance, stakeholders)?;
    Ok(LinearObjective::from_fn(instance, Sense::Max, |i, l, t| {
        objective.coefficient(instance, stakeholders, i, l, t)
    }))
}

/// Side constraint `objective(x) >= bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtLeast {
    pub objective: LinearObjective,
    pub bound: f64,
}

impl AtLeast {
    pub fn new(objective: LinearObjective, bound: f64) -> Self {
        Self { objective, bound }
    }

    pub fn holds(&self, strategy: &Strategy) -> bool {
        self.objective.value(strategy) >= self.bound - CONSTRAINT_TOLERANCE
    }
}

/// A maximized objective together with its ideal (best attainable) value.
/// Its relative deviation is `(ideal - value) / ideal`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub objective: LinearObjective,
    pub ideal: f64,
}

impl Deviation {
    pub fn new(objective: LinearObjective, ideal: f64) -> Self {
        Self { objective, ideal }
    }

    pub fn of(&self, strategy: &Strategy) -> f64 {
        relative_deviation(self.ideal, self.objective.value(strategy))
    }
}

pub(crate) fn relative_deviation(ideal: f64, value: f64) -> f64 {
    (ideal - value) / ideal
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Goal {
    Maximize(LinearObjective),
    Minimax(Vec<Deviation>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub strategy: Strategy,
    /// Objective value in its own sense, or the minimax deviation. Zero when infeasible.
    pub objective_value: f64,
    pub status: Status,
    pub nodes_explored: u64,
}

/// Best strategy for a single objective under the instance constraints.
pub fn maximize(instance: &ProblemInstance, objective: &LinearObjective) -> Result<SolveResult> {
    solve(instance, &Goal::Maximize(objective.clone()), &[])
}

/// Strategy minimizing the largest relative deviation from the ideals.
pub fn solve_minimax(instance: &ProblemInstance, deviations: &[Deviation]) -> Result<SolveResult> {
    solve(instance, &Goal::Minimax(deviations.to_vec()), &[])
}

pub(crate) fn check_goal(instance: &ProblemInstance, goal: &Goal, constraints: &[AtLeast]) -> Result<()> {
    match goal {
        Goal::Maximize(o) => o.check_dims(instance)?,
        Goal::Minimax(devs) => {
            if devs.is_empty() {
                return Err(Error::IndexOutOfRange("minimax needs at least one deviation".into()));
            }
            for (k, d) in devs.iter().enumerate() {
                d.objective.check_dims(instance)?;
                if d.objective.sense != Sense::Max {
                    return Err(Error::IndexOutOfRange(format!(
                        "deviation {k} must be a maximized objective"
                    )));
                }
                if d.ideal.is_nan() || d.ideal <= 0.0 {
                    return Err(Error::ZeroIdeal(format!("deviation {k} (ideal {})", d.ideal)));
                }
            }
        }
    }
    for c in constraints {
        c.objective.check_dims(instance)?;
    }
    Ok(())
}
