//! Dominance-based induction of "at least" decision rules from a labeled
//! sample. All objectives are gain-type.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Good,
    Other,
    #[default]
    Unlabeled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledItem {
    pub id: String,
    pub values: Vec<f64>,
    pub label: Label,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub items: Vec<LabeledItem>,
}

impl LabeledSample {
    pub fn new(items: Vec<LabeledItem>) -> Self {
        Self { items }
    }

    pub fn arity(&self) -> usize {
        self.items.first().map_or(0, |it| it.values.len())
    }

    fn good(&self) -> impl Iterator<Item = &LabeledItem> {
        self.items.iter().filter(|it| it.label == Label::Good)
    }

    /// Items that count against a rule: anything not labeled good.
    fn not_good(&self) -> impl Iterator<Item = &LabeledItem> {
        self.items.iter().filter(|it| it.label != Label::Good)
    }
}

fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Good items all of whose weak dominators are good too. Unlabeled items
/// are treated as not good.
pub fn lower_approximation(sample: &LabeledSample) -> Vec<&LabeledItem> {
    sample
        .good()
        .filter(|g| sample.not_good().all(|o| !weakly_dominates(&o.values, &g.values)))
        .collect()
}

/// `objective >= threshold`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub objective: usize,
    pub threshold: f64,
}

impl Condition {
    pub fn holds(&self, values: &[f64]) -> bool {
        values[self.objective] >= self.threshold
    }
}

/// "If every condition holds then the strategy is good."
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionRule {
    /// Sorted by objective index, at most one per objective.
    pub conditions: Vec<Condition>,
    /// Ids of the good items the rule covers.
    pub support: Vec<String>,
}

impl DecisionRule {
    pub fn covers(&self, values: &[f64]) -> bool {
        self.conditions.iter().all(|c| c.holds(values))
    }

    /// Readable form using objective `names`, e.g. `F2,2 >= 9`.
    pub fn describe(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .conditions
            .iter()
            .map(|c| format!("{} >= {}", names[c.objective], crate::error::fmt_num(c.threshold)))
            .collect();
        format!("if {} then good", parts.join(" and "))
    }
}

/// Thresholds keyed by objective; `None` means no condition.
type Draft = Vec<Option<f64>>;

struct Induction<'a> {
    sample: &'a LabeledSample,
    /// Sorted distinct values taken by good items, per objective.
    candidates: Vec<Vec<f64>>,
    lower: Vec<&'a LabeledItem>,
    others: Vec<&'a LabeledItem>,
    found: BTreeSet<Vec<(usize, u64)>>,
}

fn draft_covers(draft: &Draft, values: &[f64]) -> bool {
    draft.iter().zip(values).all(|(c, v)| c.is_none_or(|c| *v >= c))
}

impl Induction<'_> {
    fn consistent(&self, draft: &Draft) -> bool {
        !draft.iter().all(Option::is_none) && self.others.iter().all(|o| !draft_covers(draft, &o.values))
    }

    /// Smallest candidate of objective `k` strictly above `v`.
    fn above(&self, k: usize, v: f64) -> Option<f64> {
        self.candidates[k].iter().copied().find(|&c| c > v)
    }

    /// No single condition can be dropped or lowered to the previous
    /// candidate without losing consistency.
    fn minimal(&self, draft: &Draft) -> bool {
        for k in 0..draft.len() {
            let Some(rho) = draft[k] else { continue };
            let mut weaker = draft.clone();
            weaker[k] = None;
            if self.consistent(&weaker) {
                return false;
            }
            if let Some(prev) = self.candidates[k].iter().copied().rfind(|&c| c < rho) {
                weaker[k] = Some(prev);
                if self.consistent(&weaker) {
                    return false;
                }
            }
        }
        true
    }

    /// Raises thresholds until no other item is covered, branching over the
    /// objectives that can exclude the first covered one.
    fn search(&mut self, draft: &mut Draft) {
        if !self.lower.iter().any(|g| draft_covers(draft, &g.values)) {
            return;
        }
        let blocker = self.others.iter().find(|o| draft_covers(draft, &o.values)).copied();
        match blocker {
            Some(o) => {
                for k in 0..draft.len() {
                    let Some(c) = self.above(k, o.values[k]) else { continue };
                    let saved = draft[k];
                    draft[k] = Some(c);
                    self.search(draft);
                    draft[k] = saved;
                }
            }
            None if draft.iter().all(Option::is_none) => {
                // nothing to exclude: every single condition at its lowest
                // good value is a rule
                for k in 0..draft.len() {
                    if let Some(&c) = self.candidates[k].first() {
                        draft[k] = Some(c);
                        self.search(draft);
                        draft[k] = None;
                    }
                }
            }
            None => {
                if self.minimal(draft) {
                    let key = draft
                        .iter()
                        .enumerate()
                        .filter_map(|(k, c)| c.map(|c| (k, c.to_bits())))
                        .collect();
                    self.found.insert(key);
                }
            }
        }
    }
}

/// Every minimal consistent at-least rule with thresholds drawn from the
/// good items' values that covers at least one lower-approximation item.
///
/// A consistent rule is minimal when no other consistent rule uses a subset
/// of its objectives with thresholds no higher. Rules are sorted by support
/// size (descending), number of conditions, then conditions.
pub fn induce_rules(sample: &LabeledSample) -> Vec<DecisionRule> {
    let arity = sample.arity();
    let lower = lower_approximation(sample);
    if lower.is_empty() {
        log::warn!("lower approximation of the good class is empty; no rules induced");
        return Vec::new();
    }
    let candidates = (0..arity)
        .map(|k| {
            let mut vals: Vec<f64> = sample.good().map(|g| g.values[k]).collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals
        })
        .collect();
    let mut ind = Induction {
        sample,
        candidates,
        lower,
        others: sample.not_good().collect(),
        found: BTreeSet::new(),
    };
    ind.search(&mut vec![None; arity]);

    let mut rules: Vec<DecisionRule> = ind
        .found
        .iter()
        .map(|key| {
            let conditions: Vec<Condition> = key
                .iter()
                .map(|&(objective, bits)| Condition {
                    objective,
                    threshold: f64::from_bits(bits),
                })
                .collect();
            let mut rule = DecisionRule {
                conditions,
                support: Vec::new(),
            };
            rule.support = ind
                .sample
                .good()
                .filter(|g| rule.covers(&g.values))
                .map(|g| g.id.clone())
                .collect();
            rule
        })
        .collect();
    rules.sort_by(|a, b| {
        b.support
            .len()
            .cmp(&a.support.len())
            .then(a.conditions.len().cmp(&b.conditions.len()))
            .then_with(|| {
                a.conditions
                    .iter()
                    .zip(&b.conditions)
                    .map(|(x, y)| x.objective.cmp(&y.objective).then(x.threshold.total_cmp(&y.threshold)))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    rules
}
