//! Compromise programming: ideal points and minimax relative deviation.
//!
//! Each family has one member per location (CPL), criterion (CPO),
//! criterion-location pair (CPOL) or stakeholder (CPK). A member's ideal is
//! the best attainable value of its discounted aggregate; the compromise
//! strategy minimizes the largest relative shortfall from those ideals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dashboard::{aggregate, Axis, AxisSelection, DashboardObjective, StakeholderSet};
use crate::error::{Error, Result};
use crate::instance::{ProblemInstance, Strategy};
use crate::solver::{linearize, maximize, relative_deviation, solve, Deviation, Goal, LinearObjective};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CpKind {
    Cpl,
    Cpo,
    Cpol,
    Cpk,
}

impl CpKind {
    pub const ALL: [CpKind; 4] = [CpKind::Cpl, CpKind::Cpo, CpKind::Cpol, CpKind::Cpk];

    pub fn name(self) -> &'static str {
        match self {
            CpKind::Cpl => "cpl",
            CpKind::Cpo => "cpo",
            CpKind::Cpol => "cpol",
            CpKind::Cpk => "cpk",
        }
    }
}

impl fmt::Display for CpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CpKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CpKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown compromise family {s:?}"))
    }
}

/// One member of a family: the dashboard cell whose ideal is sought.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub label: String,
    pub objective: DashboardObjective,
}

/// The members of `kind` on `instance`.
pub fn family(instance: &ProblemInstance, kind: CpKind, stakeholders: Option<&StakeholderSet>) -> Result<Vec<Member>> {
    let member = |label: String, axes: AxisSelection, cell: Vec<usize>| Member {
        label,
        objective: DashboardObjective::new(axes, cell),
    };
    let members = match kind {
        CpKind::Cpl => {
            let axes = AxisSelection::standard([Axis::Location], true)?;
            instance
                .locations()
                .iter()
                .enumerate()
                .map(|(l, loc)| member(loc.id.clone(), axes.clone(), vec![l]))
                .collect()
        }
        CpKind::Cpo => {
            let axes = AxisSelection::standard([Axis::Criterion], true)?;
            instance
                .criteria()
                .iter()
                .enumerate()
                .map(|(j, c)| member(c.id.clone(), axes.clone(), vec![j]))
                .collect()
        }
        CpKind::Cpol => {
            let axes = AxisSelection::standard([Axis::Criterion, Axis::Location], true)?;
            let mut out = Vec::new();
            for (j, c) in instance.criteria().iter().enumerate() {
                for (l, loc) in instance.locations().iter().enumerate() {
                    out.push(member(format!("{}/{}", c.id, loc.id), axes.clone(), vec![j, l]));
                }
            }
            out
        }
        CpKind::Cpk => {
            let s = stakeholders.ok_or_else(|| Error::MissingStakeholders("cpk".into()))?;
            let axes = AxisSelection::stakeholder([Axis::Stakeholder], true)?;
            s.stakeholders()
                .iter()
                .enumerate()
                .map(|(k, st)| member(st.id.clone(), axes.clone(), vec![k]))
                .collect()
        }
    };
    Ok(members)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ideal {
    pub label: String,
    pub value: f64,
    /// A strategy attaining the ideal.
    pub strategy: Strategy,
}

/// Maximizes every member's aggregate independently (in parallel).
pub fn ideal_point(
    instance: &ProblemInstance,
    kind: CpKind,
    stakeholders: Option<&StakeholderSet>,
) -> Result<Vec<Ideal>> {
    let members = family(instance, kind, stakeholders)?;
    let objectives: Vec<LinearObjective> = members
        .iter()
        .map(|m| linearize(instance, &m.objective, stakeholders))
        .collect::<Result<_>>()?;
    let results: Vec<Result<Ideal>> = std::thread::scope(|scope| {
        let handles: Vec<_> = members
            .iter()
            .zip(&objectives)
            .map(|(m, obj)| {
                scope.spawn(move || {
                    maximize(instance, obj).map(|r| Ideal {
                        label: m.label.clone(),
                        value: r.objective_value,
                        strategy: r.strategy,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("ideal solve panicked"))
            .collect()
    });
    let ideals: Vec<Ideal> = results.into_iter().collect::<Result<_>>()?;
    for i in ideals.iter().filter(|i| i.value <= 0.0) {
        log::warn!(
            "{kind}: ideal of {} is zero, its relative deviation is undefined",
            i.label
        );
    }
    Ok(ideals)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpResult {
    pub kind: CpKind,
    pub members: Vec<String>,
    pub ideal: Vec<f64>,
    pub strategy: Strategy,
    /// Relative deviation per member, `NaN`-free: dropped members are omitted.
    pub deviations: Vec<f64>,
    pub minimax: f64,
    /// Members left out because their ideal is zero.
    pub dropped: Vec<String>,
    pub nodes_explored: u64,
}

impl CpResult {
    pub fn deviation(&self, label: &str) -> Option<f64> {
        let kept: Vec<&String> = self.members.iter().filter(|m| !self.dropped.contains(m)).collect();
        kept.iter().position(|m| *m == label).map(|k| self.deviations[k])
    }
}

/// Compromise strategy of `kind`. Members with a zero ideal are dropped with
/// a warning; if every ideal is zero the problem is undefined.
pub fn solve_cp(instance: &ProblemInstance, kind: CpKind, stakeholders: Option<&StakeholderSet>) -> Result<CpResult> {
    let members = family(instance, kind, stakeholders)?;
    let ideals = ideal_point(instance, kind, stakeholders)?;
    let mut devs = Vec::new();
    let mut dropped = Vec::new();
    for (m, ideal) in members.iter().zip(&ideals) {
        if ideal.value > 0.0 {
            devs.push(Deviation::new(
                linearize(instance, &m.objective, stakeholders)?,
                ideal.value,
            ));
        } else {
            dropped.push(m.label.clone());
        }
    }
    if devs.is_empty() {
        return Err(Error::ZeroIdeal(format!("every member of {kind}")));
    }
    let r = solve(instance, &Goal::Minimax(devs.clone()), &[])?;
    Ok(CpResult {
        kind,
        members: members.iter().map(|m| m.label.clone()).collect(),
        ideal: ideals.iter().map(|i| i.value).collect(),
        deviations: devs.iter().map(|d| d.of(&r.strategy)).collect(),
        minimax: r.objective_value,
        strategy: r.strategy,
        dropped,
        nodes_explored: r.nodes_explored,
    })
}

/// Relative deviation of `strategy` from each ideal, with achieved values
/// taken from the dashboard.
pub fn deviations(
    instance: &ProblemInstance,
    strategy: &Strategy,
    kind: CpKind,
    ideals: &[f64],
    stakeholders: Option<&StakeholderSet>,
) -> Result<Vec<f64>> {
    let members = family(instance, kind, stakeholders)?;
    if ideals.len() != members.len() {
        return Err(Error::IndexOutOfRange(format!(
            "{} ideals for {} members of {kind}",
            ideals.len(),
            members.len()
        )));
    }
    let axes = &members[0].objective.axes;
    let table = aggregate(instance, strategy, axes, stakeholders)?;
    members
        .iter()
        .zip(ideals)
        .map(|(m, &ideal)| {
            if ideal.is_nan() || ideal <= 0.0 {
                return Err(Error::ZeroIdeal(m.label.clone()));
            }
            let achieved = table.get(&m.objective.cell).expect("member cell");
            Ok(relative_deviation(ideal, achieved))
        })
        .collect()
}
