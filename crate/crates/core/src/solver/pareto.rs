//! Non-dominated set enumeration and feasible-region counting.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::{ProblemInstance, Strategy};

use super::model::{Constraint, Model, Opt, Tracked};
use super::{AtLeast, LinearObjective, Sense};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NondominatedPoint {
    /// Lexicographically smallest feasible strategy attaining `values`.
    pub strategy: Strategy,
    /// Objective values, each in its own sense.
    pub values: Vec<f64>,
}

/// Options of one facility with identical gains on every tracked function.
struct Class {
    options: Vec<Opt>,
    gains: Vec<f64>,
    cgains: Vec<f64>,
}

fn classes(model: &Model, parts: &[Tracked], constraints: &[Constraint], i: usize) -> Vec<Class> {
    let mut out: Vec<Class> = Vec::new();
    for &o in &model.options[i] {
        let gains: Vec<f64> = parts.iter().map(|t| t.gain(model, i, o)).collect();
        let cgains: Vec<f64> = constraints.iter().map(|c| c.tracked.gain(model, i, o)).collect();
        let same = |c: &Class| {
            c.gains.iter().zip(&gains).all(|(a, b)| a.to_bits() == b.to_bits())
                && c.cgains.iter().zip(&cgains).all(|(a, b)| a.to_bits() == b.to_bits())
        };
        match out.iter_mut().find(|c| same(c)) {
            Some(c) => c.options.push(o),
            None => out.push(Class {
                options: vec![o],
                gains,
                cgains,
            }),
        }
    }
    out
}

/// Archive of mutually non-dominated vectors (larger is better on every component).
#[derive(Default)]
struct Archive {
    points: Vec<(Vec<f64>, Strategy)>,
}

fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

impl Archive {
    fn insert(&mut self, values: Vec<f64>, strategy: Strategy) {
        for (v, s) in &mut self.points {
            if *v == values {
                if strategy < *s {
                    *s = strategy;
                }
                return;
            }
            if weakly_dominates(v, &values) {
                return;
            }
        }
        self.points.retain(|(v, _)| !weakly_dominates(&values, v));
        self.points.push((values, strategy));
    }

    /// True if some member strictly dominates everything `optimistic` bounds.
    fn excludes(&self, optimistic: &[f64]) -> bool {
        self.points
            .iter()
            .any(|(v, _)| weakly_dominates(v, optimistic) && v.as_slice() != optimistic)
    }
}

struct Enumeration<'a> {
    model: &'a Model,
    parts: &'a [Tracked],
    constraints: &'a [Constraint],
    classes: Vec<Vec<Class>>,
    /// Class choices in exploration order; `None` is "not activated".
    order: Vec<Vec<Option<usize>>>,
    assigned: Vec<Option<usize>>,
    archive: Archive,
}

/// All Pareto-maximal objective vectors over the feasible strategies that
/// satisfy `constraints`, each with one witness strategy. Sorted by vector,
/// lexicographically descending in the gain orientation.
pub fn enumerate_nondominated(
    instance: &ProblemInstance,
    objectives: &[LinearObjective],
    constraints: &[AtLeast],
) -> Result<Vec<NondominatedPoint>> {
    for o in objectives {
        o.check_dims(instance)?;
    }
    for c in constraints {
        c.objective.check_dims(instance)?;
    }
    let model = Model::new(instance);
    let parts: Vec<Tracked> = objectives.iter().map(|o| Tracked::new(&model, o.gains())).collect();
    let cons = Constraint::build(&model, constraints);
    let classes: Vec<Vec<Class>> = (0..model.n).map(|i| classes(&model, &parts, &cons, i)).collect();
    let order = classes
        .iter()
        .map(|cs| {
            let mut idx: Vec<usize> = (0..cs.len()).collect();
            idx.sort_by(|&a, &b| {
                let sa: f64 = cs[a].gains.iter().sum();
                let sb: f64 = cs[b].gains.iter().sum();
                sb.total_cmp(&sa)
            });
            let mut choices: Vec<Option<usize>> = idx.into_iter().map(Some).collect();
            choices.push(None);
            choices
        })
        .collect();
    let mut e = Enumeration {
        model: &model,
        parts: &parts,
        constraints: &cons,
        classes,
        order,
        assigned: vec![None; model.n],
        archive: Archive::default(),
    };
    let witness = vec![None; model.n];
    let spend = vec![0.0; model.p];
    e.dfs(0, &witness, &spend, &vec![0.0; parts.len()], &vec![0.0; cons.len()]);

    let mut points: Vec<(Vec<f64>, Strategy)> = e.archive.points;
    points.sort_by(|a, b| {
        b.0.iter()
            .zip(&a.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(points
        .into_iter()
        .map(|(gains, strategy)| NondominatedPoint {
            values: gains
                .iter()
                .zip(objectives)
                .map(|(g, o)| if o.sense() == Sense::Min { -g } else { *g })
                .collect(),
            strategy,
        })
        .collect())
}

impl Enumeration<'_> {
    fn dfs(&mut self, d: usize, witness: &[Option<Opt>], spend: &[f64], values: &[f64], cvalues: &[f64]) {
        let model = self.model;
        if d == model.n {
            if self.constraints.iter().zip(cvalues).all(|(c, &v)| c.satisfied(v)) {
                self.archive.insert(values.to_vec(), model.strategy(witness));
            }
            return;
        }
        if !self
            .constraints
            .iter()
            .zip(cvalues)
            .all(|(c, &v)| c.satisfied(c.tracked.optimistic(v, d)))
        {
            return;
        }
        let optimistic: Vec<f64> = self
            .parts
            .iter()
            .zip(values)
            .map(|(t, &v)| t.optimistic(v, d))
            .collect();
        if self.archive.excludes(&optimistic) {
            return;
        }

        for k in 0..self.order[d].len() {
            let choice = self.order[d][k];
            self.assigned[d] = choice;
            let Some((next_witness, next_spend)) = self.extend(d, witness, spend) else {
                continue;
            };
            let (next, cnext) = match choice {
                None => (values.to_vec(), cvalues.to_vec()),
                Some(c) => {
                    let class = &self.classes[d][c];
                    (
                        values.iter().zip(&class.gains).map(|(v, g)| v + g).collect(),
                        cvalues.iter().zip(&class.cgains).map(|(v, g)| v + g).collect(),
                    )
                }
            };
            self.dfs(d + 1, &next_witness, &next_spend, &next, &cnext);
        }
        self.assigned[d] = None;
    }

    /// Lexicographically smallest feasible witness for the class assignment of
    /// facilities `0..=d`, given the one for `0..d`.
    fn extend(&self, d: usize, witness: &[Option<Opt>], spend: &[f64]) -> Option<(Vec<Option<Opt>>, Vec<f64>)> {
        let model = self.model;
        let mut w = witness.to_vec();
        match self.assigned[d] {
            None => {
                w[d] = None;
                // a skipped facility cannot be repaired by rescheduling others
                model.precedence_ok(&w, d).then(|| (w, spend.to_vec()))
            }
            Some(c) => {
                for &o in &self.classes[d][c].options {
                    if !model.fits(spend, d, o) {
                        continue;
                    }
                    w[d] = Some(o);
                    if model.precedence_ok(&w, d) {
                        let mut s = spend.to_vec();
                        s[o.t] += model.costs[d];
                        return Some((w, s));
                    }
                }
                // earlier facilities may have to move to make room
                let mut w = vec![None; model.n];
                let mut s = vec![0.0; model.p];
                self.search(0, d, &mut w, &mut s).then_some((w, s))
            }
        }
    }

    fn search(&self, i: usize, d: usize, w: &mut Vec<Option<Opt>>, spend: &mut Vec<f64>) -> bool {
        let model = self.model;
        if i > d {
            return true;
        }
        match self.assigned[i] {
            None => {
                w[i] = None;
                model.precedence_ok(w, i) && self.search(i + 1, d, w, spend)
            }
            Some(c) => {
                for &o in &self.classes[i][c].options {
                    if !model.fits(spend, i, o) {
                        continue;
                    }
                    w[i] = Some(o);
                    if model.precedence_ok(w, i) {
                        let saved = spend[o.t];
                        spend[o.t] += model.costs[i];
                        if self.search(i + 1, d, w, spend) {
                            return true;
                        }
                        spend[o.t] = saved;
                    }
                }
                w[i] = None;
                false
            }
        }
    }
}

/// Number of feasible strategies satisfying every constraint.
pub fn count_region(instance: &ProblemInstance, constraints: &[AtLeast]) -> Result<u128> {
    for c in constraints {
        c.objective.check_dims(instance)?;
    }
    let model = Model::new(instance);
    let cons = Constraint::build(&model, constraints);
    let tracked_facilities: Vec<usize> = (0..model.n)
        .filter(|&i| instance.precedence().iter().any(|p| p.before == i || p.after == i))
        .collect();
    let mut counter = Counter {
        model: &model,
        constraints: &cons,
        tracked_facilities,
        chosen: vec![None; model.n],
        memo: HashMap::new(),
    };
    let mut spend = vec![0.0; model.p];
    Ok(counter.count(0, &mut spend, &vec![0.0; cons.len()]))
}

struct Counter<'a> {
    model: &'a Model,
    constraints: &'a [Constraint],
    tracked_facilities: Vec<usize>,
    chosen: Vec<Option<Opt>>,
    memo: HashMap<Vec<u64>, u128>,
}

impl Counter<'_> {
    fn key(&self, d: usize, spend: &[f64], cvalues: &[f64]) -> Vec<u64> {
        let mut key = vec![d as u64];
        key.extend(spend.iter().map(|s| s.to_bits()));
        key.extend(cvalues.iter().map(|s| s.to_bits()));
        for &i in self.tracked_facilities.iter().filter(|&&i| i < d) {
            key.push(self.chosen[i].map_or(u64::MAX, |o| o.t as u64));
        }
        key
    }

    fn count(&mut self, d: usize, spend: &mut Vec<f64>, cvalues: &[f64]) -> u128 {
        let model = self.model;
        if d == model.n {
            return u128::from(self.constraints.iter().zip(cvalues).all(|(c, &v)| c.satisfied(v)));
        }
        if !self
            .constraints
            .iter()
            .zip(cvalues)
            .all(|(c, &v)| c.satisfied(c.tracked.optimistic(v, d)))
        {
            return 0;
        }
        let key = self.key(d, spend, cvalues);
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        let mut total = 0u128;
        self.chosen[d] = None;
        if model.precedence_ok(&self.chosen, d) {
            total += self.count(d + 1, spend, cvalues);
        }
        for k in 0..model.options[d].len() {
            let o = model.options[d][k];
            if !model.fits(spend, d, o) {
                continue;
            }
            self.chosen[d] = Some(o);
            if model.precedence_ok(&self.chosen, d) {
                let saved = spend[o.t];
                spend[o.t] += model.costs[d];
                let cnext: Vec<f64> = self
                    .constraints
                    .iter()
                    .zip(cvalues)
                    .map(|(c, &v)| v + c.tracked.gain(model, d, o))
                    .collect();
                total += self.count(d + 1, spend, &cnext);
                spend[o.t] = saved;
            }
        }
        self.chosen[d] = None;
        self.memo.insert(key, total);
        total
    }
}
