use crate::instance::{Activation, Precedence, ProblemInstance, Strategy, TOLERANCE};

use super::{AtLeast, CONSTRAINT_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Opt {
    pub l: usize,
    pub t: usize,
}

/// The search space shared by every exact solver.
pub(crate) struct Model {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub costs: Vec<f64>,
    pub budgets: Vec<f64>,
    /// Options affordable on their own, sorted by (location, period).
    pub options: Vec<Vec<Opt>>,
    /// Precedence pairs grouped by the later of their two facilities.
    pub closing: Vec<Vec<Precedence>>,
    pub has_precedence: bool,
}

impl Model {
    pub fn new(instance: &ProblemInstance) -> Self {
        let (n, m, p) = (instance.num_facilities(), instance.num_locations(), instance.horizon());
        let options = (0..n)
            .map(|i| {
                let mut opts = Vec::new();
                for l in 0..m {
                    for t in 0..p {
                        if instance.cost(i) <= instance.budget(t) + TOLERANCE {
                            opts.push(Opt { l, t });
                        }
                    }
                }
                opts
            })
            .collect();
        let mut closing = vec![Vec::new(); n];
        for pr in instance.precedence() {
            closing[pr.before.max(pr.after)].push(*pr);
        }
        Self {
            n,
            m,
            p,
            costs: instance.costs().to_vec(),
            budgets: instance.budgets().to_vec(),
            options,
            closing,
            has_precedence: !instance.precedence().is_empty(),
        }
    }

    pub fn index(&self, i: usize, o: Opt) -> usize {
        (i * self.m + o.l) * self.p + o.t
    }

    pub fn fits(&self, spend: &[f64], i: usize, o: Opt) -> bool {
        spend[o.t] + self.costs[i] <= self.budgets[o.t] + TOLERANCE
    }

    /// Checks the precedence pairs whose later facility is `d`, given the
    /// choices of facilities `0..=d`.
    pub fn precedence_ok(&self, chosen: &[Option<Opt>], d: usize) -> bool {
        self.closing[d].iter().all(|pr| match chosen[pr.after] {
            None => true,
            Some(after) => matches!(chosen[pr.before], Some(before) if before.t <= after.t),
        })
    }

    pub fn strategy(&self, chosen: &[Option<Opt>]) -> Strategy {
        Strategy::new(
            chosen
                .iter()
                .enumerate()
                .filter_map(|(i, c)| c.map(|o| Activation::new(i, o.l, o.t))),
        )
    }

    pub fn activations(&self, chosen: &[Option<Opt>]) -> Vec<Activation> {
        chosen
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|o| Activation::new(i, o.l, o.t)))
            .collect()
    }
}

/// A linear function over the options with per-facility optimistic values.
pub(crate) struct Tracked {
    pub gains: Vec<f64>,
    /// `best[i]`: largest gain of facility `i` over its options and skipping.
    pub best: Vec<f64>,
}

impl Tracked {
    pub fn new(model: &Model, gains: Vec<f64>) -> Self {
        let best = (0..model.n)
            .map(|i| {
                model.options[i]
                    .iter()
                    .map(|&o| gains[model.index(i, o)])
                    .fold(0.0, f64::max)
            })
            .collect();
        Self { gains, best }
    }

    pub fn gain(&self, model: &Model, i: usize, o: Opt) -> f64 {
        self.gains[model.index(i, o)]
    }

    /// Upper bound on the final value given the value of facilities `0..d`.
    /// Accumulated in facility order, so it is never below the value of any
    /// completion even after rounding.
    pub fn optimistic(&self, partial: f64, d: usize) -> f64 {
        self.best[d..].iter().fold(partial, |acc, b| acc + b)
    }
}

pub(crate) struct Constraint {
    pub tracked: Tracked,
    pub bound: f64,
}

impl Constraint {
    pub fn build(model: &Model, constraints: &[AtLeast]) -> Vec<Constraint> {
        constraints
            .iter()
            .map(|c| Constraint {
                tracked: Tracked::new(model, c.objective.gains()),
                bound: match c.objective.sense() {
                    super::Sense::Max => c.bound,
                    super::Sense::Min => -c.bound,
                },
            })
            .collect()
    }

    pub fn satisfied(&self, value: f64) -> bool {
        value >= self.bound - CONSTRAINT_TOLERANCE
    }
}

/// True when every completion of the partial sequence `partial` (which can
/// only append activations of later facilities) is lexicographically no
/// smaller than `incumbent`.
pub(crate) fn completions_not_smaller(partial: &[Activation], incumbent: &[Activation]) -> bool {
    for (a, b) in partial.iter().zip(incumbent) {
        if a != b {
            return a > b;
        }
    }
    incumbent.len() <= partial.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_rules() {
        let a = |i, l, t| Activation::new(i, l, t);
        // incumbent is a prefix of the partial: every completion is larger
        assert!(completions_not_smaller(&[a(0, 0, 0), a(1, 0, 0)], &[a(0, 0, 0)]));
        // partial is a prefix of the incumbent: stopping here would be smaller
        assert!(!completions_not_smaller(&[a(0, 0, 0)], &[a(0, 0, 0), a(1, 0, 0)]));
        assert!(completions_not_smaller(&[a(0, 1, 0)], &[a(0, 0, 3), a(2, 0, 0)]));
        assert!(!completions_not_smaller(&[a(0, 0, 1)], &[a(0, 0, 3)]));
        assert!(completions_not_smaller(&[a(0, 0, 1)], &[a(0, 0, 1)]));
    }
}
