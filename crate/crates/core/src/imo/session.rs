//! The interactive loop: sample, label, induce rules, add the chosen rule as
//! constraints, repeat until the decision maker is satisfied.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ProblemInstance, Strategy};
use crate::solver::{count_region, enumerate_nondominated, AtLeast, LinearObjective, NondominatedPoint};

use super::rules::{induce_rules, DecisionRule, Label, LabeledItem, LabeledSample};
use super::thresholds::{formulation_objectives, objective_labels, Formulation, ThresholdScheme};

pub const DEFAULT_SAMPLE_SIZE: usize = 6;

/// Picks `k` spread-out points of the non-dominated set under `constraints`.
///
/// The per-objective maximizers come first (ties to the earliest point in
/// enumeration order), then points are added greedily by largest minimum
/// range-normalized Chebyshev distance to those already chosen.
pub fn sample_representatives(
    instance: &ProblemInstance,
    objectives: &[LinearObjective],
    constraints: &[AtLeast],
    k: usize,
) -> Result<Vec<NondominatedPoint>> {
    if k == 0 {
        return Err(Error::Protocol("sample size must be at least 1".into()));
    }
    let points = enumerate_nondominated(instance, objectives, constraints)?;
    if points.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if points.len() <= k {
        return Ok(points);
    }
    let arity = objectives.len();
    let range: Vec<f64> = (0..arity)
        .map(|d| {
            let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.values[d]), hi.max(p.values[d]))
            });
            if hi > lo {
                hi - lo
            } else {
                1.0
            }
        })
        .collect();
    let distance = |a: &NondominatedPoint, b: &NondominatedPoint| {
        (0..arity)
            .map(|d| (a.values[d] - b.values[d]).abs() / range[d])
            .fold(0.0, f64::max)
    };

    let mut chosen: Vec<usize> = Vec::new();
    for d in 0..arity {
        if chosen.len() == k {
            break;
        }
        let best = (0..points.len())
            .reduce(|a, b| {
                if points[b].values[d] > points[a].values[d] {
                    b
                } else {
                    a
                }
            })
            .expect("non-empty");
        if !chosen.contains(&best) {
            chosen.push(best);
        }
    }
    while chosen.len() < k {
        let next = (0..points.len())
            .filter(|p| !chosen.contains(p))
            .map(|p| {
                let gap = chosen
                    .iter()
                    .map(|&c| distance(&points[p], &points[c]))
                    .fold(f64::INFINITY, f64::min);
                (p, gap)
            })
            .reduce(|a, b| if b.1 > a.1 { b } else { a })
            .expect("fewer chosen than points")
            .0;
        chosen.push(next);
    }
    Ok(chosen.into_iter().map(|c| points[c].clone()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SessionState {
    AwaitingLabels,
    AwaitingRuleChoice,
    Satisfied,
    EmptyRegion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleItem {
    pub id: String,
    pub strategy: Strategy,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionRule {
    pub id: String,
    pub text: String,
    #[serde(flatten)]
    pub rule: DecisionRule,
}

/// A rule-derived constraint `objective >= bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConstraint {
    pub objective: usize,
    pub label: String,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Iteration {
    pub number: usize,
    pub sample: Vec<SampleItem>,
    pub labels: BTreeMap<String, Label>,
    pub rules: Vec<SessionRule>,
    pub choice: Option<String>,
    /// Feasible strategies satisfying the constraints in force for this sample.
    pub region_size: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SessionEvent {
    Sample { items: Vec<SampleItem> },
    Labels { labels: BTreeMap<String, Label> },
    Rules { rules: Vec<SessionRule> },
    Choice { rule: String },
    Satisfied { strategy: String },
}

/// Everything needed to rebuild a session on the same instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Journal {
    pub formulation: Formulation,
    pub sample_size: usize,
    pub events: Vec<SessionEvent>,
}

/// Serializable snapshot for clients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub state: SessionState,
    pub formulation: Formulation,
    pub objectives: Vec<String>,
    pub iteration: usize,
    pub sample: Vec<SampleItem>,
    pub rules: Vec<SessionRule>,
    pub constraints: Vec<SessionConstraint>,
    pub region_sizes: Vec<u128>,
    pub satisfied_with: Option<SampleItem>,
}

pub struct ImoSession {
    instance: ProblemInstance,
    formulation: Formulation,
    scheme: ThresholdScheme,
    sample_size: usize,
    objectives: Vec<LinearObjective>,
    names: Vec<String>,
    constraints: Vec<SessionConstraint>,
    history: Vec<Iteration>,
    state: SessionState,
    satisfied_with: Option<SampleItem>,
    events: Vec<SessionEvent>,
}

impl ImoSession {
    /// Opens a session and draws the first sample.
    pub fn start(
        instance: ProblemInstance,
        formulation: Formulation,
        scheme: ThresholdScheme,
        sample_size: usize,
    ) -> Result<Self> {
        if sample_size == 0 {
            return Err(Error::Protocol("sample size must be at least 1".into()));
        }
        let objectives = formulation_objectives(&instance, formulation, &scheme)?;
        let names = objective_labels(&instance, formulation, &scheme);
        let mut session = Self {
            instance,
            formulation,
            scheme,
            sample_size,
            objectives,
            names,
            constraints: Vec::new(),
            history: Vec::new(),
            state: SessionState::AwaitingLabels,
            satisfied_with: None,
            events: Vec::new(),
        };
        session.next_iteration()?;
        Ok(session)
    }

    /// Rebuilds a session by re-running every journaled step, checking that
    /// the recomputed samples and rules match the recorded ones.
    pub fn replay(instance: ProblemInstance, scheme: ThresholdScheme, journal: &Journal) -> Result<Self> {
        let mut session = Self::start(instance, journal.formulation, scheme, journal.sample_size)?;
        let mut cursor = 0;
        let expect = |session: &Self, cursor: &mut usize| -> Result<()> {
            while *cursor < session.events.len() {
                let recorded = journal
                    .events
                    .get(*cursor)
                    .ok_or_else(|| Error::Replay(format!("journal ends before event {}", *cursor + 1)))?;
                if recorded != &session.events[*cursor] {
                    return Err(Error::Replay(format!(
                        "event {} differs from the recomputation",
                        *cursor + 1
                    )));
                }
                *cursor += 1;
            }
            Ok(())
        };
        expect(&session, &mut cursor)?;
        while cursor < journal.events.len() {
            match &journal.events[cursor] {
                SessionEvent::Labels { labels } => {
                    session.submit_labels(labels.clone())?;
                }
                SessionEvent::Choice { rule } => session.choose_rule(rule)?,
                SessionEvent::Satisfied { strategy } => {
                    session.mark_satisfied(strategy)?;
                }
                other => {
                    return Err(Error::Replay(format!(
                        "event {} ({}) is not a decision maker input",
                        cursor + 1,
                        event_name(other)
                    )))
                }
            }
            expect(&session, &mut cursor)?;
        }
        Ok(session)
    }

    fn next_iteration(&mut self) -> Result<()> {
        let constraints = self.at_least();
        let region_size = count_region(&self.instance, &constraints)?;
        let number = self.history.len() + 1;
        if region_size == 0 {
            self.state = SessionState::EmptyRegion;
            self.history.push(Iteration {
                number,
                ..Iteration::default()
            });
            return Ok(());
        }
        let points = sample_representatives(&self.instance, &self.objectives, &constraints, self.sample_size)?;
        let prime = "'".repeat(number - 1);
        let sample: Vec<SampleItem> = points
            .into_iter()
            .enumerate()
            .map(|(k, p)| SampleItem {
                id: format!("ST{}{prime}", k + 1),
                strategy: p.strategy,
                values: p.values,
            })
            .collect();
        debug_assert!(sample.iter().all(|s| constraints.iter().all(|c| c.holds(&s.strategy))));
        self.events.push(SessionEvent::Sample { items: sample.clone() });
        self.history.push(Iteration {
            number,
            sample,
            region_size,
            ..Iteration::default()
        });
        self.state = SessionState::AwaitingLabels;
        Ok(())
    }

    fn at_least(&self) -> Vec<AtLeast> {
        self.constraints
            .iter()
            .map(|c| AtLeast::new(self.objectives[c.objective].clone(), c.bound))
            .collect()
    }

    fn current(&self) -> &Iteration {
        self.history.last().expect("a session always has an iteration")
    }

    fn require(&self, state: SessionState, action: &str) -> Result<()> {
        if self.state == state {
            Ok(())
        } else {
            Err(Error::Protocol(format!(
                "cannot {action} while {}",
                state_name(self.state)
            )))
        }
    }

    /// Records the decision maker's labels and induces rules. Sample items
    /// left out count as OTHER. If no rule can be induced the session keeps
    /// waiting for labels.
    pub fn submit_labels(&mut self, labels: BTreeMap<String, Label>) -> Result<&[SessionRule]> {
        self.require(SessionState::AwaitingLabels, "submit labels")?;
        let iteration = self.current();
        if let Some(id) = labels.keys().find(|id| !iteration.sample.iter().any(|s| &s.id == *id)) {
            return Err(Error::UnknownStrategy(id.clone()));
        }
        if !labels.values().any(|&l| l == Label::Good) {
            return Err(Error::Labels("at least one strategy must be labeled good".into()));
        }
        let items = iteration
            .sample
            .iter()
            .map(|s| LabeledItem {
                id: s.id.clone(),
                values: s.values.clone(),
                label: match labels.get(&s.id) {
                    Some(Label::Good) => Label::Good,
                    _ => Label::Other,
                },
            })
            .collect();
        let number = iteration.number;
        let rules: Vec<SessionRule> = induce_rules(&LabeledSample::new(items))
            .into_iter()
            .enumerate()
            .map(|(k, rule)| SessionRule {
                id: format!("R{number}.{}", k + 1),
                text: rule.describe(&self.names),
                rule,
            })
            .collect();
        self.events.push(SessionEvent::Labels { labels: labels.clone() });
        self.events.push(SessionEvent::Rules { rules: rules.clone() });
        let it = self.history.last_mut().expect("iteration");
        it.labels = labels;
        it.rules = rules;
        if !it.rules.is_empty() {
            self.state = SessionState::AwaitingRuleChoice;
        }
        Ok(&self.current().rules)
    }

    /// Adds every condition of the chosen rule as a constraint and draws the
    /// next sample.
    pub fn choose_rule(&mut self, rule_id: &str) -> Result<()> {
        self.require(SessionState::AwaitingRuleChoice, "choose a rule")?;
        let rule = self
            .current()
            .rules
            .iter()
            .find(|r| r.id == rule_id)
            .ok_or_else(|| Error::UnknownRule(rule_id.to_string()))?
            .rule
            .clone();
        for c in &rule.conditions {
            self.constraints.push(SessionConstraint {
                objective: c.objective,
                label: self.names[c.objective].clone(),
                bound: c.threshold,
            });
        }
        self.events.push(SessionEvent::Choice {
            rule: rule_id.to_string(),
        });
        self.history.last_mut().expect("iteration").choice = Some(rule_id.to_string());
        self.next_iteration()
    }

    /// Ends the session with one strategy of the current sample.
    pub fn mark_satisfied(&mut self, strategy_id: &str) -> Result<&SampleItem> {
        if !matches!(
            self.state,
            SessionState::AwaitingLabels | SessionState::AwaitingRuleChoice
        ) {
            return Err(Error::Protocol(format!(
                "cannot finish while {}",
                state_name(self.state)
            )));
        }
        let item = self
            .current()
            .sample
            .iter()
            .find(|s| s.id == strategy_id)
            .ok_or_else(|| Error::UnknownStrategy(strategy_id.to_string()))?
            .clone();
        self.events.push(SessionEvent::Satisfied {
            strategy: strategy_id.to_string(),
        });
        self.state = SessionState::Satisfied;
        Ok(self.satisfied_with.insert(item))
    }

    pub fn state(&self) -> SessionState {
        self.state
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn scheme(&self) -> &ThresholdScheme {
        &self.scheme
    }

    pub fn objectives(&self) -> &[LinearObjective] {
        &self.objectives
    }

    pub fn objective_names(&self) -> &[String] {
        &self.names
    }

    pub fn constraints(&self) -> &[SessionConstraint] {
        &self.constraints
    }

    pub fn history(&self) -> &[Iteration] {
        &self.history
    }

    pub fn sample(&self) -> &[SampleItem] {
        &self.current().sample
    }

    pub fn rules(&self) -> &[SessionRule] {
        &self.current().rules
    }

    pub fn satisfied_with(&self) -> Option<&SampleItem> {
        self.satisfied_with.as_ref()
    }

    pub fn journal(&self) -> Journal {
        Journal {
            formulation: self.formulation,
            sample_size: self.sample_size,
            events: self.events.clone(),
        }
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            state: self.state,
            formulation: self.formulation,
            objectives: self.names.clone(),
            iteration: self.current().number,
            sample: self.current().sample.clone(),
            rules: self.current().rules.clone(),
            constraints: self.constraints.clone(),
            region_sizes: self.history.iter().map(|it| it.region_size).collect(),
            satisfied_with: self.satisfied_with.clone(),
        }
    }
}

fn state_name(state: SessionState) -> &'static str {
    match state {
        SessionState::AwaitingLabels => "AWAITING_LABELS",
        SessionState::AwaitingRuleChoice => "AWAITING_RULE_CHOICE",
        SessionState::Satisfied => "SATISFIED",
        SessionState::EmptyRegion => "EMPTY_REGION",
    }
}

fn event_name(event: &SessionEvent) -> &'static str {
    match event {
        SessionEvent::Sample { .. } => "SAMPLE",
        SessionEvent::Labels { .. } => "LABELS",
        SessionEvent::Rules { .. } => "RULES",
        SessionEvent::Choice { .. } => "CHOICE",
        SessionEvent::Satisfied { .. } => "SATISFIED",
    }
}
