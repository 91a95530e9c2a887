//! Depth-first branch and bound over facilities in input order.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::{Activation, ProblemInstance, Strategy};

use super::model::{completions_not_smaller, Constraint, Model, Opt, Tracked};
use super::{check_goal, relative_deviation, AtLeast, Goal, Sense, SolveResult, Status};

/// Outcome of re-checking every pruned subtree exhaustively.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub pruned: u64,
    /// Pruned subtrees containing a completion better than the incumbent at
    /// pruning time. Always zero for a sound bound.
    pub violations: u64,
}

pub(crate) enum Scoring {
    Max(Tracked),
    Minimax { parts: Vec<Tracked>, ideals: Vec<f64> },
}

impl Scoring {
    pub fn new(model: &Model, goal: &Goal) -> Self {
        match goal {
            Goal::Maximize(o) => Scoring::Max(Tracked::new(model, o.gains())),
            Goal::Minimax(devs) => Scoring::Minimax {
                parts: devs.iter().map(|d| Tracked::new(model, d.objective.gains())).collect(),
                ideals: devs.iter().map(|d| d.ideal).collect(),
            },
        }
    }

    pub fn parts(&self) -> &[Tracked] {
        match self {
            Scoring::Max(t) => std::slice::from_ref(t),
            Scoring::Minimax { parts, .. } => parts,
        }
    }

    /// Larger is better: the objective itself, or minus the largest deviation.
    pub fn score(&self, values: &[f64]) -> f64 {
        match self {
            Scoring::Max(_) => values[0],
            Scoring::Minimax { ideals, .. } => -worst_deviation(ideals, values),
        }
    }

    pub fn upper_bound(&self, values: &[f64], d: usize) -> f64 {
        let optimistic: Vec<f64> = self
            .parts()
            .iter()
            .zip(values)
            .map(|(t, &v)| t.optimistic(v, d))
            .collect();
        self.score(&optimistic)
    }

    pub fn priority(&self, model: &Model, i: usize, o: Opt) -> f64 {
        match self {
            Scoring::Max(t) => t.gain(model, i, o),
            Scoring::Minimax { parts, ideals } => parts
                .iter()
                .zip(ideals)
                .map(|(t, ideal)| t.gain(model, i, o) / ideal)
                .sum(),
        }
    }

    /// Reported objective value for a score.
    pub fn report(&self, goal: &Goal, score: f64) -> f64 {
        match goal {
            Goal::Maximize(o) if o.sense() == Sense::Min => -score,
            Goal::Maximize(_) => score,
            Goal::Minimax(_) => -score,
        }
    }
}

fn worst_deviation(ideals: &[f64], values: &[f64]) -> f64 {
    ideals
        .iter()
        .zip(values)
        .map(|(&ideal, &v)| relative_deviation(ideal, v))
        .fold(f64::NEG_INFINITY, f64::max)
}

struct Incumbent {
    score: f64,
    activations: Vec<Activation>,
}

struct Search<'a> {
    model: &'a Model,
    scoring: &'a Scoring,
    constraints: &'a [Constraint],
    order: Vec<Vec<Option<Opt>>>,
    chosen: Vec<Option<Opt>>,
    spend: Vec<f64>,
    incumbent: Option<Incumbent>,
    nodes: u64,
    audit: Option<AuditReport>,
}

/// Exact solve of `goal` subject to the instance constraints and `constraints`.
pub fn solve(instance: &ProblemInstance, goal: &Goal, constraints: &[AtLeast]) -> Result<SolveResult> {
    run(instance, goal, constraints, false).map(|(r, _)| r)
}

/// As [`solve`], additionally re-enumerating every pruned subtree to confirm
/// that pruning never discarded a better strategy. Exponential; small
/// instances only.
pub fn solve_audited(
    instance: &ProblemInstance,
    goal: &Goal,
    constraints: &[AtLeast],
) -> Result<(SolveResult, AuditReport)> {
    run(instance, goal, constraints, true).map(|(r, a)| (r, a.unwrap_or_default()))
}

fn run(
    instance: &ProblemInstance,
    goal: &Goal,
    constraints: &[AtLeast],
    audit: bool,
) -> Result<(SolveResult, Option<AuditReport>)> {
    check_goal(instance, goal, constraints)?;
    let model = Model::new(instance);
    let scoring = Scoring::new(&model, goal);
    let constraints = Constraint::build(&model, constraints);
    let order = (0..model.n)
        .map(|i| {
            let mut choices: Vec<(f64, Option<Opt>)> = vec![(0.0, None)];
            choices.extend(
                model.options[i]
                    .iter()
                    .map(|&o| (scoring.priority(&model, i, o), Some(o))),
            );
            choices.sort_by(|a, b| b.0.total_cmp(&a.0));
            choices.into_iter().map(|(_, c)| c).collect()
        })
        .collect();
    let mut search = Search {
        model: &model,
        scoring: &scoring,
        constraints: &constraints,
        order,
        chosen: vec![None; model.n],
        spend: vec![0.0; model.p],
        incumbent: None,
        nodes: 0,
        audit: audit.then(AuditReport::default),
    };
    let values = vec![0.0; scoring.parts().len()];
    let cvalues = vec![0.0; constraints.len()];
    search.dfs(0, &values, &cvalues);
    log::debug!("branch and bound explored {} nodes", search.nodes);

    let result = match search.incumbent {
        Some(inc) => SolveResult {
            strategy: Strategy::new(inc.activations),
            objective_value: scoring.report(goal, inc.score),
            status: Status::Optimal,
            nodes_explored: search.nodes,
        },
        None => SolveResult {
            strategy: Strategy::empty(),
            objective_value: 0.0,
            status: Status::Infeasible,
            nodes_explored: search.nodes,
        },
    };
    Ok((result, search.audit))
}

impl Search<'_> {
    fn dfs(&mut self, d: usize, values: &[f64], cvalues: &[f64]) {
        self.nodes += 1;
        let model = self.model;
        if d == model.n {
            if !self.constraints.iter().zip(cvalues).all(|(c, &v)| c.satisfied(v)) {
                return;
            }
            let score = self.scoring.score(values);
            let better = match &self.incumbent {
                None => true,
                Some(inc) => {
                    score > inc.score || (score == inc.score && model.activations(&self.chosen) < inc.activations)
                }
            };
            if better {
                self.incumbent = Some(Incumbent {
                    score,
                    activations: model.activations(&self.chosen),
                });
            }
            return;
        }

        let reachable = self
            .constraints
            .iter()
            .zip(cvalues)
            .all(|(c, &v)| c.satisfied(c.tracked.optimistic(v, d)));
        let bounded = reachable
            && match &self.incumbent {
                None => false,
                Some(inc) => {
                    let ub = self.scoring.upper_bound(values, d);
                    ub < inc.score
                        || (ub == inc.score
                            && completions_not_smaller(&model.activations(&self.chosen[..d]), &inc.activations))
                }
            };
        if !reachable || bounded {
            if self.audit.is_some() {
                self.audit_prune(d, values, cvalues);
            }
            return;
        }

        for k in 0..self.order[d].len() {
            let choice = self.order[d][k];
            match choice {
                None => {
                    self.chosen[d] = None;
                    if model.precedence_ok(&self.chosen, d) {
                        self.dfs(d + 1, values, cvalues);
                    }
                }
                Some(o) => {
                    if !model.fits(&self.spend, d, o) {
                        continue;
                    }
                    self.chosen[d] = Some(o);
                    if model.precedence_ok(&self.chosen, d) {
                        let saved = self.spend[o.t];
                        self.spend[o.t] += model.costs[d];
                        let next: Vec<f64> = self
                            .scoring
                            .parts()
                            .iter()
                            .zip(values)
                            .map(|(t, &v)| v + t.gain(model, d, o))
                            .collect();
                        let cnext: Vec<f64> = self
                            .constraints
                            .iter()
                            .zip(cvalues)
                            .map(|(c, &v)| v + c.tracked.gain(model, d, o))
                            .collect();
                        self.dfs(d + 1, &next, &cnext);
                        self.spend[o.t] = saved;
                    }
                    self.chosen[d] = None;
                }
            }
        }
    }

    fn audit_prune(&mut self, d: usize, values: &[f64], cvalues: &[f64]) {
        let mut chosen = self.chosen.clone();
        let mut spend = self.spend.clone();
        let mut best: Option<(f64, Vec<Activation>)> = None;
        exhaust(
            self.model,
            self.scoring,
            self.constraints,
            d,
            &mut chosen,
            &mut spend,
            values,
            cvalues,
            &mut best,
        );
        let violation = match (&best, &self.incumbent) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some((score, acts)), Some(inc)) => *score > inc.score || (*score == inc.score && *acts < inc.activations),
        };
        let report = self.audit.as_mut().expect("audit enabled");
        report.pruned += 1;
        if violation {
            report.violations += 1;
        }
    }
}

/// Best feasible completion below a node, without any bounding.
#[allow(clippy::too_many_arguments)]
fn exhaust(
    model: &Model,
    scoring: &Scoring,
    constraints: &[Constraint],
    d: usize,
    chosen: &mut Vec<Option<Opt>>,
    spend: &mut Vec<f64>,
    values: &[f64],
    cvalues: &[f64],
    best: &mut Option<(f64, Vec<Activation>)>,
) {
    if d == model.n {
        if !constraints.iter().zip(cvalues).all(|(c, &v)| c.satisfied(v)) {
            return;
        }
        let score = scoring.score(values);
        let acts = model.activations(chosen);
        let better = match best {
            None => true,
            Some((s, a)) => score > *s || (score == *s && acts < *a),
        };
        if better {
            *best = Some((score, acts));
        }
        return;
    }
    chosen[d] = None;
    if model.precedence_ok(chosen, d) {
        exhaust(model, scoring, constraints, d + 1, chosen, spend, values, cvalues, best);
    }
    for &o in &model.options[d] {
        if !model.fits(spend, d, o) {
            continue;
        }
        chosen[d] = Some(o);
        if model.precedence_ok(chosen, d) {
            let saved = spend[o.t];
            spend[o.t] += model.costs[d];
            let next: Vec<f64> = scoring
                .parts()
                .iter()
                .zip(values)
                .map(|(t, &v)| v + t.gain(model, d, o))
                .collect();
            let cnext: Vec<f64> = constraints
                .iter()
                .zip(cvalues)
                .map(|(c, &v)| v + c.tracked.gain(model, d, o))
                .collect();
            exhaust(model, scoring, constraints, d + 1, chosen, spend, &next, &cnext, best);
            spend[o.t] = saved;
        }
    }
    chosen[d] = None;
}
