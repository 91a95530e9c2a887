//! Problem data, validation, discounting and feasibility of 0-1 strategies.
//!
//! A strategy answers three questions at once for every facility: whether it
//! is activated, in which location, and in which period. Periods run over
//! `0..=horizon`; activations may only happen in `0..horizon` and a facility
//! activated in period `tau` yields its evaluation in every accrual period
//! `t > tau`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{fmt_num, Error, Result, ValidationError, ValidationKind};

/// Absolute tolerance for equality checks on real data.
pub const TOLERANCE: f64 = 1e-9;

/// A named member of one of the index sets (facilities, locations, criteria).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Item {
    pub id: String,
    pub name: String,
}

impl Item {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
        }
    }
}

/// `before` must be activated no later than `after`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Precedence {
    pub before: usize,
    pub after: usize,
}

/// Unvalidated instance data, as read from a file or assembled in code.
///
/// `evaluations[i][j][l]` is the evaluation of facility `i` on criterion `j`
/// in location `l`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawInstance {
    pub facilities: Vec<Item>,
    pub locations: Vec<Item>,
    pub criteria: Vec<Item>,
    pub horizon: usize,
    pub evaluations: Vec<Vec<Vec<f64>>>,
    pub costs: Vec<f64>,
    pub budgets: Vec<f64>,
    pub weights: Vec<f64>,
    pub interest_rate: f64,
    pub precedence: Vec<Precedence>,
}

/// A validated planning instance. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    facilities: Vec<Item>,
    locations: Vec<Item>,
    criteria: Vec<Item>,
    horizon: usize,
    evaluations: Vec<f64>,
    /// Optional accrual-period specific evaluations, `t` in `1..=horizon`.
    period_evaluations: Option<Vec<f64>>,
    costs: Vec<f64>,
    budgets: Vec<f64>,
    weights: Vec<f64>,
    interest_rate: f64,
    precedence: Vec<Precedence>,
}

/// Checks every invariant of `raw` and returns the validated instance, or all
/// violations found.
pub fn validate_instance(raw: RawInstance) -> std::result::Result<ProblemInstance, Vec<ValidationError>> {
    let mut errors = Vec::new();
    let n = raw.facilities.len();
    let m = raw.locations.len();
    let q = raw.criteria.len();

    for (set, items) in [
        ("facilities", &raw.facilities),
        ("locations", &raw.locations),
        ("criteria", &raw.criteria),
    ] {
        let mut seen = BTreeSet::new();
        for (k, item) in items.iter().enumerate() {
            if !seen.insert(item.id.as_str()) {
                errors.push(ValidationError::new(
                    ValidationKind::DuplicateId,
                    format!("/meta/{set}/{k}/id"),
                    format!("duplicate id {:?}", item.id),
                ));
            }
        }
    }
    if m == 0 {
        errors.push(ValidationError::new(
            ValidationKind::Shape,
            "/meta/locations",
            "at least one location is required",
        ));
    }
    if q == 0 {
        errors.push(ValidationError::new(
            ValidationKind::Shape,
            "/meta/criteria",
            "at least one criterion is required",
        ));
    }
    if raw.horizon == 0 {
        errors.push(ValidationError::new(
            ValidationKind::Shape,
            "/meta/horizon",
            "horizon must be at least 1",
        ));
    }

    let mut evaluations = vec![0.0; n * q * m];
    if raw.evaluations.len() != n {
        errors.push(ValidationError::new(
            ValidationKind::MissingEvaluation,
            "/evaluations",
            format!("expected {n} facility rows, found {}", raw.evaluations.len()),
        ));
    }
    for (i, per_criterion) in raw.evaluations.iter().enumerate().take(n) {
        for j in 0..q {
            let Some(per_location) = per_criterion.get(j) else {
                errors.push(ValidationError::new(
                    ValidationKind::MissingEvaluation,
                    format!("/evaluations/{i}/{j}"),
                    format!(
                        "missing evaluations of facility {} on criterion {}",
                        raw.facilities[i].id, raw.criteria[j].id
                    ),
                ));
                continue;
            };
            for l in 0..m {
                match per_location.get(l) {
                    None => errors.push(ValidationError::new(
                        ValidationKind::MissingEvaluation,
                        format!("/evaluations/{i}/{j}/{l}"),
                        format!(
                            "missing evaluation of facility {} on criterion {} in location {}",
                            raw.facilities[i].id, raw.criteria[j].id, raw.locations[l].id
                        ),
                    )),
                    Some(&y) if !(y.is_finite() && y >= 0.0) => errors.push(ValidationError::new(
                        ValidationKind::NegativeValue,
                        format!("/evaluations/{i}/{j}/{l}"),
                        format!("evaluation must be a non-negative real, found {y}"),
                    )),
                    Some(&y) => evaluations[(i * q + j) * m + l] = y,
                }
            }
            if per_location.len() > m {
                errors.push(ValidationError::new(
                    ValidationKind::Shape,
                    format!("/evaluations/{i}/{j}"),
                    format!("expected {m} locations, found {}", per_location.len()),
                ));
            }
        }
        if per_criterion.len() > q {
            errors.push(ValidationError::new(
                ValidationKind::Shape,
                format!("/evaluations/{i}"),
                format!("expected {q} criteria, found {}", per_criterion.len()),
            ));
        }
    }

    if raw.costs.len() != n {
        errors.push(ValidationError::new(
            ValidationKind::Shape,
            "/costs",
            format!("expected {n} costs, found {}", raw.costs.len()),
        ));
    }
    for (i, &c) in raw.costs.iter().enumerate() {
        if !(c.is_finite() && c > 0.0) {
            errors.push(ValidationError::new(
                ValidationKind::NonPositiveCost,
                format!("/costs/{i}"),
                format!("cost must be positive, found {c}"),
            ));
        }
    }

    if raw.budgets.len() != raw.horizon {
        errors.push(ValidationError::new(
            ValidationKind::Shape,
            "/budgets",
            format!(
                "expected {} budgets (periods 0..{}), found {}",
                raw.horizon,
                raw.horizon,
                raw.budgets.len()
            ),
        ));
    }
    for (t, &b) in raw.budgets.iter().enumerate() {
        if !(b.is_finite() && b >= 0.0) {
            errors.push(ValidationError::new(
                ValidationKind::NegativeValue,
                format!("/budgets/{t}"),
                format!("budget must be non-negative, found {b}"),
            ));
        }
    }

    if raw.weights.len() != q {
        errors.push(ValidationError::new(
            ValidationKind::Shape,
            "/weights",
            format!("expected {q} weights, found {}", raw.weights.len()),
        ));
    }
    let mut weights_ok = true;
    for (j, &w) in raw.weights.iter().enumerate() {
        if !(w.is_finite() && w >= 0.0) {
            weights_ok = false;
            errors.push(ValidationError::new(
                ValidationKind::NegativeValue,
                format!("/weights/{j}"),
                format!("weight must be non-negative, found {w}"),
            ));
        }
    }
    let sum: f64 = raw.weights.iter().sum();
    if weights_ok && (sum - 1.0).abs() > TOLERANCE {
        errors.push(ValidationError::new(
            ValidationKind::WeightSum,
            "/weights",
            format!("weights sum {} ≠ 1", fmt_num(sum)),
        ));
    }

    if !(raw.interest_rate.is_finite() && raw.interest_rate >= 0.0) {
        errors.push(ValidationError::new(
            ValidationKind::NegativeValue,
            "/meta/interest_rate",
            format!("interest rate must be non-negative, found {}", raw.interest_rate),
        ));
    }

    let mut precedence_ok = true;
    for (k, p) in raw.precedence.iter().enumerate() {
        if p.before >= n || p.after >= n {
            precedence_ok = false;
            errors.push(ValidationError::new(
                ValidationKind::UnknownIndex,
                format!("/precedence/{k}"),
                format!("precedence references unknown facility ({}, {})", p.before, p.after),
            ));
        }
    }
    if precedence_ok && has_cycle(n, &raw.precedence) {
        errors.push(ValidationError::new(
            ValidationKind::PrecedenceCycle,
            "/precedence",
            "precedence cycle",
        ));
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    let mut precedence = raw.precedence;
    precedence.sort();
    precedence.dedup();
    Ok(ProblemInstance {
        facilities: raw.facilities,
        locations: raw.locations,
        criteria: raw.criteria,
        horizon: raw.horizon,
        evaluations,
        period_evaluations: None,
        costs: raw.costs,
        budgets: raw.budgets,
        weights: raw.weights,
        interest_rate: raw.interest_rate,
        precedence,
    })
}

fn has_cycle(n: usize, pairs: &[Precedence]) -> bool {
    let mut indegree = vec![0usize; n];
    let mut next = vec![Vec::new(); n];
    for p in pairs {
        next[p.before].push(p.after);
        indegree[p.after] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut visited = 0;
    while let Some(i) = ready.pop() {
        visited += 1;
        for &k in &next[i] {
            indegree[k] -= 1;
            if indegree[k] == 0 {
                ready.push(k);
            }
        }
    }
    visited < n
}

/// Present-value factor `(1 + rate)^(-t)` of a performance accrued in period `t`.
pub fn discount_factor(t: usize, rate: f64) -> f64 {
    (1.0 + rate).powi(-(t as i32))
}

impl ProblemInstance {
    pub fn facilities(&self) -> &[Item] {
        &self.facilities
    }

    pub fn locations(&self) -> &[Item] {
        &self.locations
    }

    pub fn criteria(&self) -> &[Item] {
        &self.criteria
    }

    pub fn num_facilities(&self) -> usize {
        self.facilities.len()
    }

    pub fn num_locations(&self) -> usize {
        self.locations.len()
    }

    pub fn num_criteria(&self) -> usize {
        self.criteria.len()
    }

    /// `p`: periods are `0..=p`, activations happen in `0..p`.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Time-invariant evaluation `y_ijl`.
    pub fn evaluation(&self, i: usize, j: usize, l: usize) -> f64 {
        self.evaluations[(i * self.criteria.len() + j) * self.locations.len() + l]
    }

    /// Evaluation accrued in period `t` (`1..=p`). Equal to [`Self::evaluation`]
    /// unless the instance carries period-specific (expected) evaluations.
    pub fn accrued(&self, i: usize, j: usize, l: usize, t: usize) -> f64 {
        match &self.period_evaluations {
            Some(values) => values[self.period_slot(i, j, l, t)],
            None => self.evaluation(i, j, l),
        }
    }

    pub fn has_period_evaluations(&self) -> bool {
        self.period_evaluations.is_some()
    }

    fn period_slot(&self, i: usize, j: usize, l: usize, t: usize) -> usize {
        debug_assert!(t >= 1 && t <= self.horizon);
        (((i * self.criteria.len() + j) * self.locations.len() + l) * self.horizon) + (t - 1)
    }

    pub fn cost(&self, i: usize) -> f64 {
        self.costs[i]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn budget(&self, t: usize) -> f64 {
        self.budgets[t]
    }

    pub fn budgets(&self) -> &[f64] {
        &self.budgets
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interest_rate(&self) -> f64 {
        self.interest_rate
    }

    pub fn precedence(&self) -> &[Precedence] {
        &self.precedence
    }

    pub fn discount(&self, t: usize) -> f64 {
        discount_factor(t, self.interest_rate)
    }

    pub fn facility_index(&self, id: &str) -> Option<usize> {
        self.facilities.iter().position(|f| f.id == id)
    }

    pub fn location_index(&self, id: &str) -> Option<usize> {
        self.locations.iter().position(|f| f.id == id)
    }

    pub fn criterion_index(&self, id: &str) -> Option<usize> {
        self.criteria.iter().position(|f| f.id == id)
    }

    /// Back to editable form, e.g. to derive a modified instance. Period
    /// specific evaluations are not part of the raw form and are dropped.
    pub fn to_raw(&self) -> RawInstance {
        let (n, q, m) = (self.num_facilities(), self.num_criteria(), self.num_locations());
        RawInstance {
            facilities: self.facilities.clone(),
            locations: self.locations.clone(),
            criteria: self.criteria.clone(),
            horizon: self.horizon,
            evaluations: (0..n)
                .map(|i| {
                    (0..q)
                        .map(|j| (0..m).map(|l| self.evaluation(i, j, l)).collect())
                        .collect()
                })
                .collect(),
            costs: self.costs.clone(),
            budgets: self.budgets.clone(),
            weights: self.weights.clone(),
            interest_rate: self.interest_rate,
            precedence: self.precedence.clone(),
        }
    }

    /// Replaces accrual-period evaluations with `f(i, j, l, t)` for `t` in `1..=p`.
    pub(crate) fn with_period_evaluations(&self, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut out = self.clone();
        let (n, q, m, p) = (
            self.num_facilities(),
            self.num_criteria(),
            self.num_locations(),
            self.horizon,
        );
        let mut values = vec![0.0; n * q * m * p];
        for i in 0..n {
            for j in 0..q {
                for l in 0..m {
                    for t in 1..=p {
                        values[self.period_slot(i, j, l, t)] = f(i, j, l, t);
                    }
                }
            }
        }
        out.period_evaluations = Some(values);
        out
    }

    pub(crate) fn check_activation(&self, a: &Activation) -> Result<()> {
        if a.facility >= self.num_facilities() {
            return Err(Error::IndexOutOfRange(format!("facility {}", a.facility)));
        }
        if a.location >= self.num_locations() {
            return Err(Error::IndexOutOfRange(format!("location {}", a.location)));
        }
        if a.period >= self.horizon {
            return Err(Error::IndexOutOfRange(format!(
                "period {} (activations must happen before period {})",
                a.period, self.horizon
            )));
        }
        Ok(())
    }
}

/// `x_ilt = 1`: facility activated in a location at the start of a period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Activation {
    pub facility: usize,
    pub location: usize,
    pub period: usize,
}

impl Activation {
    pub fn new(facility: usize, location: usize, period: usize) -> Self {
        Self {
            facility,
            location,
            period,
        }
    }
}

/// A set of activations, kept sorted by (facility, location, period).
///
/// The derived ordering is the lexicographic order of that sorted sequence,
/// which the solvers use to break ties between equally good strategies.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Activation>", into = "Vec<Activation>")]
pub struct Strategy {
    activations: Vec<Activation>,
}

impl Strategy {
    pub fn new(activations: impl IntoIterator<Item = Activation>) -> Self {
        let mut activations: Vec<Activation> = activations.into_iter().collect();
        activations.sort();
        activations.dedup();
        Self { activations }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn activations(&self) -> &[Activation] {
        &self.activations
    }

    pub fn is_empty(&self) -> bool {
        self.activations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.activations.len()
    }

    /// The first activation of facility `i`, if any.
    pub fn activation_of(&self, i: usize) -> Option<&Activation> {
        self.activations.iter().find(|a| a.facility == i)
    }

    pub fn contains(&self, a: &Activation) -> bool {
        self.activations.binary_search(a).is_ok()
    }
}

impl From<Vec<Activation>> for Strategy {
    fn from(value: Vec<Activation>) -> Self {
        Strategy::new(value)
    }
}

impl From<Strategy> for Vec<Activation> {
    fn from(value: Strategy) -> Self {
        value.activations
    }
}

impl FromIterator<Activation> for Strategy {
    fn from_iter<T: IntoIterator<Item = Activation>>(iter: T) -> Self {
        Strategy::new(iter)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Budget,
    Activation,
    Precedence,
    FacilityBound,
    LocationBound,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
    pub period: Option<usize>,
    pub facility: Option<usize>,
    pub location: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| {
            (a.kind, a.period, a.facility, a.location).cmp(&(b.kind, b.period, b.facility, b.location))
        });
        Self {
            feasible: violations.is_empty(),
            violations,
        }
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Checks budget, single-activation and (weak) precedence constraints.
///
/// Out-of-range indices are an error, not a violation.
pub fn check_feasibility(instance: &ProblemInstance, strategy: &Strategy) -> Result<FeasibilityReport> {
    for a in strategy.activations() {
        instance.check_activation(a)?;
    }
    let mut violations = Vec::new();

    let mut spend = vec![0.0; instance.horizon()];
    for a in strategy.activations() {
        spend[a.period] += instance.cost(a.facility);
    }
    for (t, &s) in spend.iter().enumerate() {
        if s > instance.budget(t) + TOLERANCE {
            violations.push(Violation {
                kind: ViolationKind::Budget,
                detail: format!(
                    "period {t}: spend {} exceeds budget {}",
                    fmt_num(s),
                    fmt_num(instance.budget(t))
                ),
                period: Some(t),
                facility: None,
                location: None,
            });
        }
    }

    let mut per_facility: BTreeMap<usize, Vec<&Activation>> = BTreeMap::new();
    for a in strategy.activations() {
        per_facility.entry(a.facility).or_default().push(a);
    }
    for (&i, acts) in &per_facility {
        if acts.len() > 1 {
            violations.push(Violation {
                kind: ViolationKind::Activation,
                detail: format!(
                    "facility {} activated {} times",
                    instance.facilities()[i].id,
                    acts.len()
                ),
                period: None,
                facility: Some(i),
                location: None,
            });
        }
    }

    for p in instance.precedence() {
        let Some(after) = per_facility.get(&p.after) else {
            continue;
        };
        let latest_allowed = after.iter().map(|a| a.period).min().unwrap_or(usize::MAX);
        let ok = per_facility
            .get(&p.before)
            .is_some_and(|before| before.iter().any(|a| a.period <= latest_allowed));
        if !ok {
            violations.push(Violation {
                kind: ViolationKind::Precedence,
                detail: format!(
                    "{} must be activated no later than {} (period {latest_allowed})",
                    instance.facilities()[p.before].id,
                    instance.facilities()[p.after].id
                ),
                period: Some(latest_allowed),
                facility: Some(p.after),
                location: None,
            });
        }
    }

    Ok(FeasibilityReport::from_violations(violations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::council;

    #[test]
    fn council_instance_is_valid() {
        let inst = council();
        assert_eq!(inst.num_facilities(), 8);
        assert_eq!(inst.horizon(), 5);
        assert_eq!(inst.evaluation(3, 2, 0), 90.0);
    }

    #[test]
    fn weight_sum_error() {
        let mut raw = council().to_raw();
        raw.weights = vec![0.5, 0.3, 0.3];
        let errors = validate_instance(raw).unwrap_err();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].kind, ValidationKind::WeightSum);
        assert_eq!(errors[0].pointer, "/weights");
        assert_eq!(errors[0].message, "weights sum 1.1 ≠ 1");
    }

    #[test]
    fn precedence_two_cycle() {
        let mut raw = council().to_raw();
        raw.precedence = vec![Precedence { before: 0, after: 1 }, Precedence { before: 1, after: 0 }];
        let errors = validate_instance(raw).unwrap_err();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].kind, ValidationKind::PrecedenceCycle);
        assert_eq!(errors[0].message, "precedence cycle");
    }

    #[test]
    fn reports_every_violation() {
        let mut raw = council().to_raw();
        raw.evaluations[2][1].pop();
        raw.costs[0] = -1.0;
        raw.budgets[3] = -5.0;
        let errors = validate_instance(raw).unwrap_err();
        let kinds: Vec<_> = errors.iter().map(|e| e.kind).collect();
        assert!(kinds.contains(&ValidationKind::MissingEvaluation));
        assert!(kinds.contains(&ValidationKind::NonPositiveCost));
        assert!(kinds.contains(&ValidationKind::NegativeValue));
        assert!(errors.iter().any(|e| e.pointer == "/evaluations/2/1/1"));
    }

    fn discount_by_division(t: usize, rate: f64) -> f64 {
        let mut v = 1.0;
        for _ in 0..t {
            v /= 1.0 + rate;
        }
        v
    }

    #[test]
    fn discount_examples() {
        assert_eq!(discount_factor(0, 0.1), 1.0);
        assert!((discount_factor(1, 0.1) - discount_by_division(1, 0.1)).abs() < 1e-15);
        assert!((discount_factor(1, 0.1) - 0.909_090_909_090_909).abs() < 1e-12);
        assert!((discount_factor(2, 0.1) - discount_by_division(2, 0.1)).abs() < 1e-15);
        assert!((discount_factor(2, 0.1) - 0.826_446_280_991_735_6).abs() < 1e-12);
        assert_eq!(discount_factor(7, 0.0), 1.0);
    }

    #[test]
    fn weighted_optimum_is_feasible() {
        let inst = council();
        let s = crate::testing::weighted_optimum();
        let report = check_feasibility(&inst, &s).unwrap();
        assert!(report.feasible, "{:?}", report.violations);
        let spend0: f64 = s
            .activations()
            .iter()
            .filter(|a| a.period == 0)
            .map(|a| inst.cost(a.facility))
            .sum();
        assert_eq!(spend0, 400.0);
    }

    #[test]
    fn empty_strategy_is_feasible() {
        let report = check_feasibility(&council(), &Strategy::empty()).unwrap();
        assert!(report.feasible);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn leisure_centre_in_first_year_breaks_budget() {
        let report = check_feasibility(&council(), &Strategy::new([Activation::new(1, 0, 1)])).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::Budget);
        assert_eq!(report.violations[0].period, Some(1));
    }

    #[test]
    fn double_activation_and_precedence() {
        let mut raw = council().to_raw();
        raw.precedence = vec![Precedence { before: 3, after: 6 }];
        let inst = validate_instance(raw).unwrap();
        let s = Strategy::new([
            Activation::new(6, 0, 0),
            Activation::new(3, 0, 1),
            Activation::new(3, 1, 2),
        ]);
        let report = check_feasibility(&inst, &s).unwrap();
        assert_eq!(report.count(ViolationKind::Activation), 1);
        assert_eq!(report.count(ViolationKind::Precedence), 1);

        // successor without predecessor
        let s = Strategy::new([Activation::new(6, 0, 0)]);
        assert_eq!(
            check_feasibility(&inst, &s).unwrap().count(ViolationKind::Precedence),
            1
        );
        // same period is allowed
        let s = Strategy::new([Activation::new(6, 0, 2), Activation::new(3, 1, 2)]);
        assert!(check_feasibility(&inst, &s).unwrap().feasible);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let inst = council();
        assert!(check_feasibility(&inst, &Strategy::new([Activation::new(8, 0, 0)])).is_err());
        assert!(check_feasibility(&inst, &Strategy::new([Activation::new(0, 0, 5)])).is_err());
    }
}
