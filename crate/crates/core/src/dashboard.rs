//! Aggregate performance tables of a strategy.
//!
//! Every table is a marginal of the per-cell performance
//! `y_ijlt(x) = sum_{tau < t} x_ilτ * y_ijl` over some subset of the axes
//! facility (I), criterion (J), location (L), accrual period (T) and,
//! when stakeholders are present, stakeholder (K). Discounted tables carry
//! the factor `v(t)` of the accrual period.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{fmt_num, Error, Result, ValidationError, ValidationKind};
use crate::instance::{Item, ProblemInstance, Strategy, TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Facility,
    Criterion,
    Location,
    Period,
    Stakeholder,
}

impl Axis {
    pub const ALL: [Axis; 5] = [
        Axis::Facility,
        Axis::Criterion,
        Axis::Location,
        Axis::Period,
        Axis::Stakeholder,
    ];

    pub fn letter(self) -> char {
        match self {
            Axis::Facility => 'I',
            Axis::Criterion => 'J',
            Axis::Location => 'L',
            Axis::Period => 'T',
            Axis::Stakeholder => 'K',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Facility => "facility",
            Axis::Criterion => "criterion",
            Axis::Location => "location",
            Axis::Period => "period",
            Axis::Stakeholder => "stakeholder",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    None,
    Criterion,
    Stakeholder,
}

/// Which axes a table keeps, whether it is discounted, and how criteria are
/// weighted when summed out.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisSelection {
    kept: Vec<Axis>,
    discounted: bool,
    weighting: Weighting,
}

impl AxisSelection {
    pub fn new(kept: impl IntoIterator<Item = Axis>, discounted: bool, weighting: Weighting) -> Result<Self> {
        let kept: BTreeSet<Axis> = kept.into_iter().collect();
        if kept.contains(&Axis::Criterion) && weighting != Weighting::None {
            return Err(Error::Axes("criterion-indexed tables are unweighted".into()));
        }
        if kept.contains(&Axis::Stakeholder) && weighting != Weighting::Stakeholder {
            return Err(Error::Axes("the stakeholder axis needs stakeholder weighting".into()));
        }
        Ok(Self {
            kept: kept.into_iter().collect(),
            discounted,
            weighting,
        })
    }

    /// The single-decision-maker convention: criterion weights whenever the
    /// criterion axis is summed out.
    pub fn standard(kept: impl IntoIterator<Item = Axis>, discounted: bool) -> Result<Self> {
        let kept: BTreeSet<Axis> = kept.into_iter().collect();
        let weighting = if kept.contains(&Axis::Criterion) {
            Weighting::None
        } else {
            Weighting::Criterion
        };
        Self::new(kept, discounted, weighting)
    }

    /// Stakeholder convention: criterion axis summed out with `w_jk`, and with
    /// `z_k` as well when the stakeholder axis is dropped.
    pub fn stakeholder(kept: impl IntoIterator<Item = Axis>, discounted: bool) -> Result<Self> {
        Self::new(kept, discounted, Weighting::Stakeholder)
    }

    /// The overall weighted (discounted) performance.
    pub fn overall(discounted: bool) -> Self {
        Self {
            kept: Vec::new(),
            discounted,
            weighting: Weighting::Criterion,
        }
    }

    pub fn kept(&self) -> &[Axis] {
        &self.kept
    }

    pub fn keeps(&self, axis: Axis) -> bool {
        self.kept.contains(&axis)
    }

    pub fn discounted(&self) -> bool {
        self.discounted
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn with_discounted(&self, discounted: bool) -> Self {
        Self {
            discounted,
            ..self.clone()
        }
    }

    /// Table name such as `yhat^JLT`, `y^LTK` or `y^L(z)` for planner-weighted
    /// stakeholder tables.
    pub fn name(&self) -> String {
        let mut s = String::from(if self.discounted { "yhat" } else { "y" });
        if !self.kept.is_empty() {
            s.push('^');
            s.extend(self.kept.iter().map(|a| a.letter()));
        }
        if self.weighting == Weighting::Stakeholder && !self.keeps(Axis::Stakeholder) {
            s.push_str("(z)");
        }
        if self.weighting == Weighting::None && !self.keeps(Axis::Criterion) {
            s.push_str("(unweighted)");
        }
        s
    }
}

/// Stakeholders with their own criterion weights `w_jk` and planner weights `z_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StakeholderSet {
    stakeholders: Vec<Item>,
    /// `criterion_weights[k][j]`
    criterion_weights: Vec<Vec<f64>>,
    planner_weights: Vec<f64>,
}

impl StakeholderSet {
    pub fn new(
        stakeholders: Vec<Item>,
        criterion_weights: Vec<Vec<f64>>,
        planner_weights: Vec<f64>,
        num_criteria: usize,
    ) -> std::result::Result<Self, Vec<ValidationError>> {
        let mut errors = Vec::new();
        let b = stakeholders.len();
        if b == 0 {
            errors.push(ValidationError::new(
                ValidationKind::Shape,
                "/stakeholders",
                "at least one stakeholder is required",
            ));
        }
        if criterion_weights.len() != b {
            errors.push(ValidationError::new(
                ValidationKind::Shape,
                "/stakeholders/criterion_weights",
                format!("expected {b} weight rows, found {}", criterion_weights.len()),
            ));
        }
        for (k, row) in criterion_weights.iter().enumerate() {
            let pointer = format!("/stakeholders/criterion_weights/{k}");
            if row.len() != num_criteria {
                errors.push(ValidationError::new(
                    ValidationKind::Shape,
                    pointer,
                    format!("expected {num_criteria} weights, found {}", row.len()),
                ));
                continue;
            }
            check_weights(row, &pointer, &mut errors);
        }
        if planner_weights.len() != b {
            errors.push(ValidationError::new(
                ValidationKind::Shape,
                "/stakeholders/planner_weights",
                format!("expected {b} planner weights, found {}", planner_weights.len()),
            ));
        } else {
            check_weights(&planner_weights, "/stakeholders/planner_weights", &mut errors);
        }
        if errors.is_empty() {
            Ok(Self {
                stakeholders,
                criterion_weights,
                planner_weights,
            })
        } else {
            Err(errors)
        }
    }

    pub fn stakeholders(&self) -> &[Item] {
        &self.stakeholders
    }

    pub fn len(&self) -> usize {
        self.stakeholders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stakeholders.is_empty()
    }

    pub fn criterion_weight(&self, j: usize, k: usize) -> f64 {
        self.criterion_weights[k][j]
    }

    pub fn criterion_weights(&self) -> &[Vec<f64>] {
        &self.criterion_weights
    }

    pub fn planner_weight(&self, k: usize) -> f64 {
        self.planner_weights[k]
    }

    pub fn planner_weights(&self) -> &[f64] {
        &self.planner_weights
    }
}

fn check_weights(row: &[f64], pointer: &str, errors: &mut Vec<ValidationError>) {
    let mut ok = true;
    for (j, &w) in row.iter().enumerate() {
        if !(w.is_finite() && w >= 0.0) {
            ok = false;
            errors.push(ValidationError::new(
                ValidationKind::NegativeValue,
                format!("{pointer}/{j}"),
                format!("weight must be non-negative, found {w}"),
            ));
        }
    }
    let sum: f64 = row.iter().sum();
    if ok && (sum - 1.0).abs() > TOLERANCE {
        errors.push(ValidationError::new(
            ValidationKind::WeightSum,
            pointer,
            format!("weights sum {} ≠ 1", fmt_num(sum)),
        ));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub index: Vec<usize>,
    pub value: f64,
}

/// One aggregation, with a cell for every index tuple of the kept axes in
/// lexicographic order. Period indices are accrual periods `1..=p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DashboardTable {
    pub name: String,
    pub axes: AxisSelection,
    pub cells: Vec<Cell>,
}

impl DashboardTable {
    pub fn get(&self, index: &[usize]) -> Option<f64> {
        self.cells
            .binary_search_by(|c| c.index.as_slice().cmp(index))
            .ok()
            .map(|k| self.cells[k].value)
    }

    /// The value of a table without kept axes.
    pub fn scalar(&self) -> Option<f64> {
        self.get(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|c| c.value == 0.0)
    }
}

impl fmt::Display for DashboardTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        for c in &self.cells {
            writeln!(f, "  {:?} {}", c.index, c.value)?;
        }
        Ok(())
    }
}

/// `y_ijlt(x)`: the evaluation of facility `i` on criterion `j` accrued in
/// period `t` in location `l`, if it was activated there before `t`.
pub fn performance_cell(
    instance: &ProblemInstance,
    strategy: &Strategy,
    i: usize,
    j: usize,
    l: usize,
    t: usize,
) -> f64 {
    if t == 0 {
        return 0.0;
    }
    let active = strategy
        .activations()
        .iter()
        .filter(|a| a.facility == i && a.location == l && a.period < t)
        .count();
    active as f64 * instance.accrued(i, j, l, t)
}

fn axis_len(instance: &ProblemInstance, stakeholders: Option<&StakeholderSet>, axis: Axis) -> usize {
    match axis {
        Axis::Facility => instance.num_facilities(),
        Axis::Criterion => instance.num_criteria(),
        Axis::Location => instance.num_locations(),
        Axis::Period => instance.horizon(),
        Axis::Stakeholder => stakeholders.map_or(0, |s| s.len()),
    }
}

fn axis_start(axis: Axis) -> usize {
    if axis == Axis::Period {
        1
    } else {
        0
    }
}

fn check_axes(axes: &AxisSelection, stakeholders: Option<&StakeholderSet>) -> Result<()> {
    if axes.weighting() == Weighting::Stakeholder && stakeholders.is_none() {
        return Err(Error::MissingStakeholders(axes.name()));
    }
    Ok(())
}

/// All index tuples of the kept axes, lexicographic.
pub fn index_tuples(
    instance: &ProblemInstance,
    stakeholders: Option<&StakeholderSet>,
    axes: &AxisSelection,
) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &axis in axes.kept() {
        let start = axis_start(axis);
        let end = start + axis_len(instance, stakeholders, axis);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (start..end).map(move |v| {
                    let mut idx = prefix.clone();
                    idx.push(v);
                    idx
                })
            })
            .collect();
    }
    out
}

/// Weight of a `(j, k)` term. `k` is ignored unless the weighting is by stakeholder.
fn term_weight(
    instance: &ProblemInstance,
    stakeholders: Option<&StakeholderSet>,
    axes: &AxisSelection,
    j: usize,
    k: usize,
) -> f64 {
    match axes.weighting() {
        Weighting::None => 1.0,
        Weighting::Criterion => instance.weight(j),
        Weighting::Stakeholder => {
            let s = stakeholders.expect("checked");
            let w = s.criterion_weight(j, k);
            if axes.keeps(Axis::Stakeholder) {
                w
            } else {
                s.planner_weight(k) * w
            }
        }
    }
}

/// Computes one table by summing weighted performance cells over all dropped axes.
pub fn aggregate(
    instance: &ProblemInstance,
    strategy: &Strategy,
    axes: &AxisSelection,
    stakeholders: Option<&StakeholderSet>,
) -> Result<DashboardTable> {
    check_axes(axes, stakeholders)?;
    for a in strategy.activations() {
        instance.check_activation(a)?;
    }
    let tuples = index_tuples(instance, stakeholders, axes);
    let mut cells: Vec<Cell> = tuples.into_iter().map(|index| Cell { index, value: 0.0 }).collect();
    let num_k = if axes.weighting() == Weighting::Stakeholder {
        stakeholders.map_or(1, |s| s.len())
    } else {
        1
    };
    let kept_lens: Vec<usize> = axes
        .kept()
        .iter()
        .map(|&a| axis_len(instance, stakeholders, a))
        .collect();

    for i in 0..instance.num_facilities() {
        for j in 0..instance.num_criteria() {
            for l in 0..instance.num_locations() {
                for t in 1..=instance.horizon() {
                    let y = performance_cell(instance, strategy, i, j, l, t);
                    if y == 0.0 {
                        continue;
                    }
                    let v = if axes.discounted() { instance.discount(t) } else { 1.0 };
                    for k in 0..num_k {
                        let term = term_weight(instance, stakeholders, axes, j, k) * y * v;
                        let coords = [i, j, l, t - 1, k];
                        let mut flat = 0;
                        for (&axis, len) in axes.kept().iter().zip(&kept_lens) {
                            flat = flat * len + coords[axis as usize];
                        }
                        cells[flat].value += term;
                    }
                }
            }
        }
    }
    Ok(DashboardTable {
        name: axes.name(),
        axes: axes.clone(),
        cells,
    })
}

fn subsets(axes: &[Axis]) -> Vec<Vec<Axis>> {
    let mut out = Vec::new();
    for mask in (0..1u32 << axes.len()).rev() {
        out.push(
            axes.iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << (axes.len() - 1 - b)) != 0)
                .map(|(_, &a)| a)
                .collect(),
        );
    }
    out
}

/// Every named aggregation: the 16 single-decision-maker tables undiscounted
/// and discounted, followed (when stakeholders are given) by the 16
/// stakeholder tables of each kind.
pub fn full_report(
    instance: &ProblemInstance,
    strategy: &Strategy,
    stakeholders: Option<&StakeholderSet>,
) -> Result<Vec<DashboardTable>> {
    let mut tables = Vec::new();
    let base = [Axis::Facility, Axis::Criterion, Axis::Location, Axis::Period];
    for discounted in [false, true] {
        for kept in subsets(&base) {
            tables.push(aggregate(
                instance,
                strategy,
                &AxisSelection::standard(kept, discounted)?,
                None,
            )?);
        }
    }
    if stakeholders.is_some() {
        let base = [Axis::Facility, Axis::Location, Axis::Period];
        for discounted in [false, true] {
            for with_k in [true, false] {
                for mut kept in subsets(&base) {
                    if with_k {
                        kept.push(Axis::Stakeholder);
                    }
                    tables.push(aggregate(
                        instance,
                        strategy,
                        &AxisSelection::stakeholder(kept, discounted)?,
                        stakeholders,
                    )?);
                }
            }
        }
    }
    Ok(tables)
}

/// One cell of one table, viewed as a function of the strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DashboardObjective {
    pub axes: AxisSelection,
    pub cell: Vec<usize>,
}

impl DashboardObjective {
    pub fn new(axes: AxisSelection, cell: Vec<usize>) -> Self {
        Self { axes, cell }
    }

    /// `yhat(x)`, the overall weighted discounted performance.
    pub fn overall() -> Self {
        Self::new(AxisSelection::overall(true), Vec::new())
    }

    pub fn evaluate(
        &self,
        instance: &ProblemInstance,
        strategy: &Strategy,
        stakeholders: Option<&StakeholderSet>,
    ) -> Result<f64> {
        let table = aggregate(instance, strategy, &self.axes, stakeholders)?;
        table
            .get(&self.cell)
            .ok_or_else(|| Error::IndexOutOfRange(format!("cell {:?} of {}", self.cell, table.name)))
    }

    pub(crate) fn check(&self, instance: &ProblemInstance, stakeholders: Option<&StakeholderSet>) -> Result<()> {
        check_axes(&self.axes, stakeholders)?;
        if self.cell.len() != self.axes.kept().len() {
            return Err(Error::IndexOutOfRange(format!(
                "cell {:?} of {}",
                self.cell,
                self.axes.name()
            )));
        }
        for (&axis, &v) in self.axes.kept().iter().zip(&self.cell) {
            let start = axis_start(axis);
            if v < start || v >= start + axis_len(instance, stakeholders, axis) {
                return Err(Error::IndexOutOfRange(format!("{} index {v}", axis.name())));
            }
        }
        Ok(())
    }

    /// Value of the objective for the single activation `x_ilτ = 1`.
    pub(crate) fn coefficient(
        &self,
        instance: &ProblemInstance,
        stakeholders: Option<&StakeholderSet>,
        i: usize,
        l: usize,
        tau: usize,
    ) -> f64 {
        let fixed = |axis: Axis| self.axes.kept().iter().position(|&a| a == axis).map(|p| self.cell[p]);
        if fixed(Axis::Facility).is_some_and(|v| v != i) || fixed(Axis::Location).is_some_and(|v| v != l) {
            return 0.0;
        }
        let criteria: Vec<usize> = match fixed(Axis::Criterion) {
            Some(j) => vec![j],
            None => (0..instance.num_criteria()).collect(),
        };
        let periods: Vec<usize> = match fixed(Axis::Period) {
            Some(t) if t > tau => vec![t],
            Some(_) => Vec::new(),
            None => (tau + 1..=instance.horizon()).collect(),
        };
        let ks: Vec<usize> = match (self.axes.weighting(), fixed(Axis::Stakeholder)) {
            (Weighting::Stakeholder, Some(k)) => vec![k],
            (Weighting::Stakeholder, None) => (0..stakeholders.map_or(0, |s| s.len())).collect(),
            _ => vec![0],
        };
        let mut total = 0.0;
        for &t in &periods {
            let v = if self.axes.discounted() {
                instance.discount(t)
            } else {
                1.0
            };
            let mut per_period = 0.0;
            for &j in &criteria {
                let w: f64 = ks
                    .iter()
                    .map(|&k| term_weight(instance, stakeholders, &self.axes, j, k))
                    .sum();
                per_period += w * instance.accrued(i, j, l, t);
            }
            total += per_period * v;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{validate_instance, Activation};
    use crate::testing::{council, weighted_optimum};

    #[test]
    fn performance_cell_examples() {
        let inst = council();
        let s = weighted_optimum();
        // Recycling, environmental, North, first accrual period
        assert_eq!(performance_cell(&inst, &s, 3, 2, 0, 1), 90.0);
        // School is activated in period 2 and only accrues from period 3
        assert_eq!(performance_cell(&inst, &s, 0, 1, 0, 2), 0.0);
        assert_eq!(performance_cell(&inst, &s, 0, 1, 0, 3), 90.0);
        assert_eq!(performance_cell(&inst, &s, 1, 0, 0, 5), 0.0);
    }

    #[test]
    fn location_period_cell() {
        let inst = council();
        let axes = AxisSelection::standard([Axis::Location, Axis::Period], false).unwrap();
        let table = aggregate(&inst, &weighted_optimum(), &axes, None).unwrap();
        assert_eq!(table.name, "y^LT");
        assert!((table.get(&[0, 1]).unwrap() - 69.3).abs() < 1e-9);
        assert_eq!(table.cells.len(), 10);
    }

    #[test]
    fn overall_of_empty_strategy_is_zero() {
        let t = aggregate(&council(), &Strategy::empty(), &AxisSelection::overall(true), None).unwrap();
        assert_eq!(t.scalar(), Some(0.0));
    }

    #[test]
    fn criterion_table_counts_accrual_periods() {
        let inst = council();
        let s = weighted_optimum();
        let axes = AxisSelection::standard([Axis::Criterion], false).unwrap();
        let table = aggregate(&inst, &s, &axes, None).unwrap();
        let expected: f64 = s
            .activations()
            .iter()
            .map(|a| inst.evaluation(a.facility, 0, a.location) * (5 - a.period) as f64)
            .sum();
        assert!((table.get(&[0]).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn axis_rules() {
        assert!(AxisSelection::new([Axis::Criterion], false, Weighting::Criterion).is_err());
        assert!(AxisSelection::new([Axis::Stakeholder], false, Weighting::Criterion).is_err());
        let axes = AxisSelection::stakeholder([Axis::Stakeholder], true).unwrap();
        assert!(matches!(
            aggregate(&council(), &Strategy::empty(), &axes, None),
            Err(Error::MissingStakeholders(_))
        ));
    }

    fn table12(q: usize) -> StakeholderSet {
        StakeholderSet::new(
            vec![
                Item::new("planning", "Planning"),
                Item::new("development", "Development"),
                Item::new("government", "Government"),
            ],
            vec![
                vec![0.1, 0.1, 0.8],
                vec![0.1, 0.2, 0.7],
                vec![0.4 / 1.1, 0.3 / 1.1, 0.4 / 1.1],
            ],
            vec![0.5, 0.4, 0.1],
            q,
        )
        .unwrap()
    }

    #[test]
    fn printed_government_row_is_rejected() {
        let errors = StakeholderSet::new(
            vec![Item::new("g", "Government")],
            vec![vec![0.4, 0.3, 0.4]],
            vec![1.0],
            3,
        )
        .unwrap_err();
        assert_eq!(errors[0].kind, ValidationKind::WeightSum);
        assert_eq!(errors[0].message, "weights sum 1.1 ≠ 1");
    }

    #[test]
    fn full_report_contents() {
        let inst = council();
        let sh = table12(3);
        let tables = full_report(&inst, &weighted_optimum(), Some(&sh)).unwrap();
        assert_eq!(tables.len(), 64);
        let names: BTreeSet<&str> = tables.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names.len(), 64);
        let k = tables.iter().find(|t| t.name == "yhat^K").unwrap();
        assert_eq!(k.cells.len(), 3);
        // undiscounted per-period values only grow as activations accumulate
        let lt = tables.iter().find(|t| t.name == "y^LT").unwrap();
        for w in (1..=5).collect::<Vec<_>>().windows(2) {
            assert!(lt.get(&[0, w[1]]).unwrap() >= lt.get(&[0, w[0]]).unwrap() - 1e-12);
        }
        let empty = full_report(&inst, &Strategy::empty(), Some(&sh)).unwrap();
        assert!(empty.iter().all(DashboardTable::is_zero));
    }

    #[test]
    fn coefficient_matches_singleton_aggregate() {
        let inst = council();
        let sh = table12(3);
        let objectives = [
            DashboardObjective::overall(),
            DashboardObjective::new(AxisSelection::standard([Axis::Location], true).unwrap(), vec![1]),
            DashboardObjective::new(
                AxisSelection::standard([Axis::Criterion, Axis::Period], true).unwrap(),
                vec![2, 3],
            ),
            DashboardObjective::new(AxisSelection::stakeholder([Axis::Stakeholder], true).unwrap(), vec![2]),
            DashboardObjective::new(AxisSelection::stakeholder([Axis::Location], false).unwrap(), vec![0]),
        ];
        for obj in &objectives {
            for i in 0..8 {
                for l in 0..2 {
                    for tau in 0..5 {
                        let s = Strategy::new([Activation::new(i, l, tau)]);
                        let direct = obj.evaluate(&inst, &s, Some(&sh)).unwrap();
                        let c = obj.coefficient(&inst, Some(&sh), i, l, tau);
                        assert!(
                            (direct - c).abs() < 1e-9,
                            "{} {i} {l} {tau}: {direct} vs {c}",
                            obj.axes.name()
                        );
                    }
                }
            }
        }
        // Recycling North in period 0: weighted row times the annuity factor
        let c = DashboardObjective::overall().coefficient(&inst, None, 3, 0, 0);
        let annuity: f64 = (1..=5).map(|t| 1.1f64.powi(-t)).sum();
        assert!((c - 69.3 * annuity).abs() < 1e-9);
        assert!((c - 262.70).abs() < 0.01);
    }

    #[test]
    fn zero_rate_discount_is_identity() {
        let mut raw = council().to_raw();
        raw.interest_rate = 0.0;
        let inst = validate_instance(raw).unwrap();
        let axes = AxisSelection::standard([Axis::Facility, Axis::Period], false).unwrap();
        let a = aggregate(&inst, &weighted_optimum(), &axes, None).unwrap();
        let b = aggregate(&inst, &weighted_optimum(), &axes.with_discounted(true), None).unwrap();
        assert_eq!(a.cells, b.cells);
    }
}
