//! Continuous budget allocation: `x_ilt` is the money given to facility `i`
//! in location `l` in period `t`, and evaluations are read as performance
//! per unit of budget.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dashboard::DashboardObjective;
use crate::error::{fmt_num, Error, Result, ValidationError, ValidationKind};
use crate::instance::{FeasibilityReport, ProblemInstance, Violation, ViolationKind, TOLERANCE};

use super::simplex::{self, LinearProgram, RowKind};

/// Slack allowed when checking an allocation against its constraints.
pub const ALLOCATION_TOLERANCE: f64 = 1e-6;

/// Optional per-(facility, period) and per-(location, period) budget bounds.
/// A missing key means unconstrained.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BudgetBounds {
    pub facility_max: BTreeMap<(usize, usize), f64>,
    pub facility_min: BTreeMap<(usize, usize), f64>,
    pub location_max: BTreeMap<(usize, usize), f64>,
    pub location_min: BTreeMap<(usize, usize), f64>,
}

impl BudgetBounds {
    pub fn is_empty(&self) -> bool {
        self.facility_max.is_empty()
            && self.facility_min.is_empty()
            && self.location_max.is_empty()
            && self.location_min.is_empty()
    }

    /// Checks indices, signs and `min <= max`. Maxima above the period
    /// budget are redundant rather than contradictory and come back as
    /// warnings.
    pub fn validate(&self, instance: &ProblemInstance) -> std::result::Result<Vec<String>, Vec<ValidationError>> {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        let p = instance.horizon();
        let maps = [
            ("facility_max", &self.facility_max, instance.num_facilities()),
            ("facility_min", &self.facility_min, instance.num_facilities()),
            ("location_max", &self.location_max, instance.num_locations()),
            ("location_min", &self.location_min, instance.num_locations()),
        ];
        for (name, map, len) in maps {
            for (&(k, t), &v) in map {
                let pointer = format!("/continuous/{name}/{k}/{t}");
                if k >= len || t >= p {
                    errors.push(ValidationError::new(
                        ValidationKind::UnknownIndex,
                        pointer,
                        format!("bound references unknown index ({k}, period {t})"),
                    ));
                    continue;
                }
                if !(v.is_finite() && v >= 0.0) {
                    errors.push(ValidationError::new(
                        ValidationKind::NegativeValue,
                        pointer,
                        format!("bound must be non-negative, found {v}"),
                    ));
                    continue;
                }
                if name.ends_with("max") && v > instance.budget(t) + TOLERANCE {
                    warnings.push(format!(
                        "{pointer}: maximum {} exceeds the period budget {}",
                        fmt_num(v),
                        fmt_num(instance.budget(t))
                    ));
                }
            }
        }
        for (name, min, max) in [
            ("facility", &self.facility_min, &self.facility_max),
            ("location", &self.location_min, &self.location_max),
        ] {
            for (key, lo) in min {
                if let Some(hi) = max.get(key) {
                    if lo > hi {
                        errors.push(ValidationError::new(
                            ValidationKind::BoundOrder,
                            format!("/continuous/{name}_min/{}/{}", key.0, key.1),
                            format!("minimum {} exceeds maximum {}", fmt_num(*lo), fmt_num(*hi)),
                        ));
                    }
                }
            }
        }
        if errors.is_empty() {
            Ok(warnings)
        } else {
            Err(errors)
        }
    }
}

/// Amounts `x_ilt >= 0` on the full `(facility, location, period)` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetAllocation {
    dims: (usize, usize, usize),
    amounts: Vec<f64>,
}

impl BudgetAllocation {
    pub fn zeros(instance: &ProblemInstance) -> Self {
        let dims = (instance.num_facilities(), instance.num_locations(), instance.horizon());
        Self {
            dims,
            amounts: vec![0.0; dims.0 * dims.1 * dims.2],
        }
    }

    pub fn from_entries(instance: &ProblemInstance, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut a = Self::zeros(instance);
        for &(i, l, t, v) in entries {
            if i >= a.dims.0 || l >= a.dims.1 || t >= a.dims.2 {
                return Err(Error::IndexOutOfRange(format!("allocation entry ({i}, {l}, {t})")));
            }
            a.set(i, l, t, v);
        }
        Ok(a)
    }

    fn slot(&self, i: usize, l: usize, t: usize) -> usize {
        (i * self.dims.1 + l) * self.dims.2 + t
    }

    pub fn get(&self, i: usize, l: usize, t: usize) -> f64 {
        self.amounts[self.slot(i, l, t)]
    }

    pub fn set(&mut self, i: usize, l: usize, t: usize, v: f64) {
        let k = self.slot(i, l, t);
        self.amounts[k] = v;
    }

    pub fn amounts(&self) -> &[f64] {
        &self.amounts
    }

    /// Non-zero entries as `(facility, location, period, amount)`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let (n, m, p) = self.dims;
        let mut out = Vec::new();
        for i in 0..n {
            for l in 0..m {
                for t in 0..p {
                    let v = self.get(i, l, t);
                    if v != 0.0 {
                        out.push((i, l, t, v));
                    }
                }
            }
        }
        out
    }
}

/// The allocation linear program over variables `x_ilt`, indexed
/// `(i * m + l) * p + t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetProgram {
    dims: (usize, usize, usize),
    /// Per-unit value of each variable in the overall discounted performance.
    pub coefficients: Vec<f64>,
    /// One independent program per activation period.
    pub periods: Vec<LinearProgram>,
    /// Whether the objective was degenerate (all zero) and replaced by
    /// "minimize total allocation".
    pub least_allocation: bool,
}

impl BudgetProgram {
    pub fn num_vars(&self) -> usize {
        self.coefficients.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.periods.iter().map(|lp| lp.rows.len()).sum()
    }

    /// The same constraints as one program over all variables.
    pub fn whole(&self) -> LinearProgram {
        let (n, m, p) = self.dims;
        let mut lp = LinearProgram::new(n * m * p);
        for (t, period) in self.periods.iter().enumerate() {
            let global = |k: usize| {
                let (i, l) = (k / m, k % m);
                (i * m + l) * p + t
            };
            for (k, c) in period.objective.iter().enumerate() {
                lp.objective[global(k)] = *c;
            }
            for row in &period.rows {
                lp.add_row(
                    row.coefficients.iter().map(|&(k, c)| (global(k), c)).collect(),
                    row.kind,
                    row.rhs,
                );
            }
        }
        lp
    }

    pub fn value(&self, allocation: &BudgetAllocation) -> f64 {
        self.coefficients
            .iter()
            .zip(allocation.amounts())
            .map(|(c, x)| c * x)
            .sum()
    }
}

/// Builds the allocation program: per-period totals within `B_t`, facility
/// bounds summed over locations, location bounds summed over facilities.
pub fn build_program(instance: &ProblemInstance, bounds: &BudgetBounds) -> Result<BudgetProgram> {
    if let Err(errors) = bounds.validate(instance) {
        return Err(Error::Validation(errors));
    }
    let (n, m, p) = (instance.num_facilities(), instance.num_locations(), instance.horizon());
    let overall = DashboardObjective::overall();
    let mut coefficients = vec![0.0; n * m * p];
    for i in 0..n {
        for l in 0..m {
            for t in 0..p {
                coefficients[(i * m + l) * p + t] = overall.coefficient(instance, None, i, l, t);
            }
        }
    }
    let least_allocation = coefficients.iter().all(|&c| c == 0.0);

    let periods = (0..p)
        .map(|t| {
            // local variable k = i * m + l
            let mut lp = LinearProgram::new(n * m);
            for i in 0..n {
                for l in 0..m {
                    lp.objective[i * m + l] = if least_allocation {
                        -1.0
                    } else {
                        coefficients[(i * m + l) * p + t]
                    };
                }
            }
            lp.add_row((0..n * m).map(|k| (k, 1.0)).collect(), RowKind::Le, instance.budget(t));
            for i in 0..n {
                let row: Vec<(usize, f64)> = (0..m).map(|l| (i * m + l, 1.0)).collect();
                if let Some(&v) = bounds.facility_max.get(&(i, t)) {
                    lp.add_row(row.clone(), RowKind::Le, v);
                }
                if let Some(&v) = bounds.facility_min.get(&(i, t)) {
                    lp.add_row(row, RowKind::Ge, v);
                }
            }
            for l in 0..m {
                let row: Vec<(usize, f64)> = (0..n).map(|i| (i * m + l, 1.0)).collect();
                if let Some(&v) = bounds.location_max.get(&(l, t)) {
                    lp.add_row(row.clone(), RowKind::Le, v);
                }
                if let Some(&v) = bounds.location_min.get(&(l, t)) {
                    lp.add_row(row, RowKind::Ge, v);
                }
            }
            lp
        })
        .collect();
    Ok(BudgetProgram {
        dims: (n, m, p),
        coefficients,
        periods,
        least_allocation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub allocation: BudgetAllocation,
    /// Overall discounted performance of the allocation.
    pub objective_value: f64,
}

/// Solves each period independently and concatenates the allocations.
pub fn solve_lp(program: &BudgetProgram) -> Result<LpOutcome> {
    let (n, m, p) = program.dims;
    let mut allocation = BudgetAllocation {
        dims: program.dims,
        amounts: vec![0.0; n * m * p],
    };
    for (t, lp) in program.periods.iter().enumerate() {
        let sol = simplex::solve(lp)?;
        for i in 0..n {
            for l in 0..m {
                allocation.set(i, l, t, sol.x[i * m + l]);
            }
        }
    }
    Ok(LpOutcome {
        objective_value: program.value(&allocation),
        allocation,
    })
}

/// Solves the program as a single LP; the reference for [`solve_lp`].
pub fn solve_whole(program: &BudgetProgram) -> Result<LpOutcome> {
    let sol = simplex::solve(&program.whole())?;
    let allocation = BudgetAllocation {
        dims: program.dims,
        amounts: sol.x,
    };
    Ok(LpOutcome {
        objective_value: program.value(&allocation),
        allocation,
    })
}

/// Checks every allocation constraint with [`ALLOCATION_TOLERANCE`] slack.
pub fn check_allocation(
    instance: &ProblemInstance,
    bounds: &BudgetBounds,
    allocation: &BudgetAllocation,
) -> FeasibilityReport {
    let (n, m, p) = (instance.num_facilities(), instance.num_locations(), instance.horizon());
    let mut violations = Vec::new();
    let mut push = |kind, detail: String, period, facility, location| {
        violations.push(Violation {
            kind,
            detail,
            period: Some(period),
            facility,
            location,
        })
    };
    for i in 0..n {
        for l in 0..m {
            for t in 0..p {
                let v = allocation.get(i, l, t);
                if v < -ALLOCATION_TOLERANCE {
                    push(
                        ViolationKind::Negative,
                        format!("x[{i},{l},{t}] = {} is negative", fmt_num(v)),
                        t,
                        Some(i),
                        Some(l),
                    );
                }
            }
        }
    }
    for t in 0..p {
        let total: f64 = (0..n)
            .flat_map(|i| (0..m).map(move |l| (i, l)))
            .map(|(i, l)| allocation.get(i, l, t))
            .sum();
        if total > instance.budget(t) + ALLOCATION_TOLERANCE {
            push(
                ViolationKind::Budget,
                format!(
                    "period {t}: allocated {} exceeds budget {}",
                    fmt_num(total),
                    fmt_num(instance.budget(t))
                ),
                t,
                None,
                None,
            );
        }
        for i in 0..n {
            let s: f64 = (0..m).map(|l| allocation.get(i, l, t)).sum();
            let id = &instance.facilities()[i].id;
            if let Some(&hi) = bounds.facility_max.get(&(i, t)) {
                if s > hi + ALLOCATION_TOLERANCE {
                    push(
                        ViolationKind::FacilityBound,
                        format!(
                            "{id} period {t}: allocated {} above maximum {}",
                            fmt_num(s),
                            fmt_num(hi)
                        ),
                        t,
                        Some(i),
                        None,
                    );
                }
            }
            if let Some(&lo) = bounds.facility_min.get(&(i, t)) {
                if s < lo - ALLOCATION_TOLERANCE {
                    push(
                        ViolationKind::FacilityBound,
                        format!(
                            "{id} period {t}: allocated {} below minimum {}",
                            fmt_num(s),
                            fmt_num(lo)
                        ),
                        t,
                        Some(i),
                        None,
                    );
                }
            }
        }
        for l in 0..m {
            let s: f64 = (0..n).map(|i| allocation.get(i, l, t)).sum();
            let id = &instance.locations()[l].id;
            if let Some(&hi) = bounds.location_max.get(&(l, t)) {
                if s > hi + ALLOCATION_TOLERANCE {
                    push(
                        ViolationKind::LocationBound,
                        format!(
                            "{id} period {t}: allocated {} above maximum {}",
                            fmt_num(s),
                            fmt_num(hi)
                        ),
                        t,
                        None,
                        Some(l),
                    );
                }
            }
            if let Some(&lo) = bounds.location_min.get(&(l, t)) {
                if s < lo - ALLOCATION_TOLERANCE {
                    push(
                        ViolationKind::LocationBound,
                        format!(
                            "{id} period {t}: allocated {} below minimum {}",
                            fmt_num(s),
                            fmt_num(lo)
                        ),
                        t,
                        None,
                        Some(l),
                    );
                }
            }
        }
    }
    FeasibilityReport::from_violations(violations)
}
