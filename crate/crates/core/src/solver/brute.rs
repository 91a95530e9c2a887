//! Exhaustive enumeration, used as the reference for the other solvers.

use crate::error::{Error, Result};
use crate::instance::{ProblemInstance, Strategy, TOLERANCE};

use super::bnb::Scoring;
use super::model::{Constraint, Model, Opt};
use super::{check_goal, AtLeast, Goal, SolveResult, Status};

/// Largest number of candidate strategies [`brute_force`] will enumerate.
pub const BRUTE_FORCE_LIMIT: f64 = 1e8;

/// Number of candidate strategies: the product over facilities of one plus
/// the number of individually affordable `(location, period)` options.
pub fn candidate_count(instance: &ProblemInstance) -> f64 {
    Model::new(instance)
        .options
        .iter()
        .map(|o| (o.len() + 1) as f64)
        .product()
}

/// Enumerates every combination of per-facility choices, filters the
/// feasible ones and keeps the best, ties going to the lexicographically
/// smallest strategy.
pub fn brute_force(instance: &ProblemInstance, goal: &Goal, constraints: &[AtLeast]) -> Result<SolveResult> {
    check_goal(instance, goal, constraints)?;
    let candidates = candidate_count(instance);
    if candidates > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            candidates,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let model = Model::new(instance);
    let scoring = Scoring::new(&model, goal);
    let constraints = Constraint::build(&model, constraints);
    let n = model.n;

    // odometer over choice indices; 0 means "not activated"
    let mut digits = vec![0usize; n];
    let mut best: Option<(f64, Strategy)> = None;
    let mut visited = 0u64;
    let mut chosen: Vec<Option<Opt>> = vec![None; n];
    loop {
        visited += 1;
        for i in 0..n {
            chosen[i] = if digits[i] == 0 {
                None
            } else {
                Some(model.options[i][digits[i] - 1])
            };
        }
        if let Some(score) = evaluate(&model, &scoring, &constraints, &chosen) {
            let better = match &best {
                None => true,
                Some((s, strat)) => score > *s || (score == *s && model.strategy(&chosen) < *strat),
            };
            if better {
                best = Some((score, model.strategy(&chosen)));
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(finish(goal, &scoring, best, visited));
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] <= model.options[i].len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn finish(goal: &Goal, scoring: &Scoring, best: Option<(f64, Strategy)>, visited: u64) -> SolveResult {
    match best {
        Some((score, strategy)) => SolveResult {
            strategy,
            objective_value: scoring.report(goal, score),
            status: Status::Optimal,
            nodes_explored: visited,
        },
        None => SolveResult {
            strategy: Strategy::empty(),
            objective_value: 0.0,
            status: Status::Infeasible,
            nodes_explored: visited,
        },
    }
}

/// Score of a complete assignment, or `None` if it is infeasible.
fn evaluate(model: &Model, scoring: &Scoring, constraints: &[Constraint], chosen: &[Option<Opt>]) -> Option<f64> {
    let mut spend = vec![0.0; model.p];
    for (i, c) in chosen.iter().enumerate() {
        if let Some(o) = c {
            spend[o.t] += model.costs[i];
        }
    }
    if spend.iter().zip(&model.budgets).any(|(s, b)| *s > b + TOLERANCE) {
        return None;
    }
    if model.has_precedence && !(0..model.n).all(|d| model.precedence_ok(chosen, d)) {
        return None;
    }
    for c in constraints {
        let v = fold(model, &c.tracked.gains, chosen);
        if !c.satisfied(v) {
            return None;
        }
    }
    let values: Vec<f64> = scoring.parts().iter().map(|t| fold(model, &t.gains, chosen)).collect();
    Some(scoring.score(&values))
}

fn fold(model: &Model, gains: &[f64], chosen: &[Option<Opt>]) -> f64 {
    chosen.iter().enumerate().fold(0.0, |acc, (i, c)| match c {
        Some(o) => acc + gains[model.index(i, *o)],
        None => acc,
    })
}
