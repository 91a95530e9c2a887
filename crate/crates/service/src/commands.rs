//! Operations shared by the command-line tool and the HTTP API.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use stplan_core::compromise::{family, solve_cp, CpKind, CpResult};
use stplan_core::dashboard::{aggregate, full_report, AxisSelection, DashboardObjective, DashboardTable};
use stplan_core::imo::{Formulation, ImoSession, Journal};
use stplan_core::lp::{build_program, check_allocation, solve_lp};
use stplan_core::solver::{brute_force, linearize, maximize, solve, Deviation, Goal, LinearObjective};
use stplan_core::{check_feasibility, ProblemInstance, Strategy};

use crate::error::{from_json, Result, ServiceError};
use crate::file::Workbench;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Overall discounted performance.
    #[default]
    Overall,
    Cpl,
    Cpo,
    Cpol,
    Cpk,
}

impl Objective {
    fn compromise(self) -> Option<CpKind> {
        match self {
            Objective::Overall => None,
            Objective::Cpl => Some(CpKind::Cpl),
            Objective::Cpo => Some(CpKind::Cpo),
            Objective::Cpol => Some(CpKind::Cpol),
            Objective::Cpk => Some(CpKind::Cpk),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveRequest {
    pub objective: Objective,
    /// Replace uncertain evaluations by their expectation.
    pub expected: bool,
    /// Solve the continuous budget-allocation model instead.
    pub continuous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedActivation {
    pub facility: String,
    pub name: String,
    pub location: String,
    pub period: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedAmount {
    pub facility: String,
    pub location: String,
    pub period: usize,
    pub amount: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub objective: Objective,
    pub expected: bool,
    pub continuous: bool,
    /// Value of the optimized objective: overall performance, the minimax
    /// deviation for compromise objectives, the LP value when continuous.
    pub value: f64,
    /// Overall discounted performance of the result.
    pub overall: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub activations: Vec<NamedActivation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub allocation: Vec<NamedAmount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compromise: Option<CpResult>,
    pub nodes_explored: u64,
    /// Every dashboard table of the 0-1 result.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dashboard: Vec<DashboardTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Instance a request works on: the expected-value instance if asked for.
pub fn working_instance(wb: &Workbench, expected: bool) -> Result<ProblemInstance> {
    if expected {
        if wb.trees.is_empty() {
            log::warn!("--expected without an uncertainty block; using the deterministic evaluations");
        }
        wb.expected_instance()
    } else {
        Ok(wb.instance.clone())
    }
}

pub fn named(instance: &ProblemInstance, strategy: &Strategy) -> Vec<NamedActivation> {
    strategy
        .activations()
        .iter()
        .map(|a| NamedActivation {
            facility: instance.facilities()[a.facility].id.clone(),
            name: instance.facilities()[a.facility].name.clone(),
            location: instance.locations()[a.location].id.clone(),
            period: a.period,
        })
        .collect()
}

pub fn overall_value(instance: &ProblemInstance, strategy: &Strategy) -> Result<f64> {
    let table = aggregate(instance, strategy, &AxisSelection::overall(true), None)?;
    Ok(table.scalar().unwrap_or(0.0))
}

pub fn solve_request(wb: &Workbench, req: &SolveRequest) -> Result<SolveOutput> {
    let instance = working_instance(wb, req.expected)?;
    let mut warnings = wb.warnings.clone();
    if req.continuous {
        if req.objective != Objective::Overall {
            return Err(ServiceError::Usage(
                "the continuous model supports only the overall objective".into(),
            ));
        }
        let bounds = wb.bounds.clone().unwrap_or_default();
        let program = build_program(&instance, &bounds)?;
        let outcome = solve_lp(&program)?;
        let report = check_allocation(&instance, &bounds, &outcome.allocation);
        warnings.extend(
            report
                .violations
                .iter()
                .map(|v| format!("allocation check: {}", v.detail)),
        );
        let allocation = outcome
            .allocation
            .entries()
            .into_iter()
            .map(|(i, l, t, amount)| NamedAmount {
                facility: instance.facilities()[i].id.clone(),
                location: instance.locations()[l].id.clone(),
                period: t,
                amount,
            })
            .collect();
        return Ok(SolveOutput {
            objective: req.objective,
            expected: req.expected,
            continuous: true,
            value: outcome.objective_value,
            overall: outcome.objective_value,
            strategy: None,
            activations: Vec::new(),
            allocation,
            compromise: None,
            nodes_explored: 0,
            dashboard: Vec::new(),
            warnings,
        });
    }

    let (strategy, value, nodes, compromise) = match req.objective.compromise() {
        None => {
            let r = maximize(&instance, &linearize(&instance, &DashboardObjective::overall(), None)?)?;
            (r.strategy, r.objective_value, r.nodes_explored, None)
        }
        Some(kind) => {
            let r = solve_cp(&instance, kind, wb.stakeholders.as_ref())?;
            warnings.extend(
                r.dropped
                    .iter()
                    .map(|m| format!("{kind}: member {m} has a zero ideal and was left out")),
            );
            (r.strategy.clone(), r.minimax, r.nodes_explored, Some(r))
        }
    };
    Ok(SolveOutput {
        objective: req.objective,
        expected: req.expected,
        continuous: false,
        value,
        overall: overall_value(&instance, &strategy)?,
        activations: named(&instance, &strategy),
        dashboard: full_report(&instance, &strategy, wb.stakeholders.as_ref())?,
        strategy: Some(strategy),
        allocation: Vec::new(),
        compromise,
        nodes_explored: nodes,
        warnings,
    })
}

/// Plain-text rendering for the terminal.
pub fn render_solve(out: &SolveOutput) -> String {
    let mut s = String::new();
    if out.continuous {
        let _ = writeln!(
            s,
            "{:<12} {:<10} {:>6} {:>14}",
            "facility", "location", "period", "amount"
        );
        for a in &out.allocation {
            let _ = writeln!(
                s,
                "{:<12} {:<10} {:>6} {:>14.6}",
                a.facility, a.location, a.period, a.amount
            );
        }
    } else {
        let _ = writeln!(s, "{:<8} {:<24} {:<10} {:>6}", "facility", "name", "location", "period");
        for a in &out.activations {
            let _ = writeln!(s, "{:<8} {:<24} {:<10} {:>6}", a.facility, a.name, a.location, a.period);
        }
        if out.activations.is_empty() {
            let _ = writeln!(s, "(no activations)");
        }
    }
    let _ = writeln!(
        s,
        "objective: {}",
        serde_json::to_value(out.objective)
            .unwrap()
            .as_str()
            .unwrap_or_default()
    );
    let _ = writeln!(s, "value: {}", out.value);
    if out.value != out.overall {
        let _ = writeln!(s, "overall discounted performance: {}", out.overall);
    }
    s
}

pub fn read_strategy(text: &str) -> Result<Strategy> {
    from_json(text)
}

/// Every dashboard table of `strategy`. Infeasible strategies are reported
/// as warnings; their tables are still computed.
pub fn dashboard(wb: &Workbench, strategy: &Strategy, expected: bool) -> Result<(Vec<DashboardTable>, Vec<String>)> {
    let instance = working_instance(wb, expected)?;
    let report = check_feasibility(&instance, strategy)?;
    let warnings = report
        .violations
        .iter()
        .map(|v| format!("infeasible strategy: {}", v.detail))
        .collect();
    Ok((full_report(&instance, strategy, wb.stakeholders.as_ref())?, warnings))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub branch_and_bound: f64,
    pub brute_force: f64,
    pub strategies_match: bool,
    pub ok: bool,
}

fn compare(name: &str, instance: &ProblemInstance, goal: &Goal) -> Result<OracleCheck> {
    let a = solve(instance, goal, &[])?;
    let b = brute_force(instance, goal, &[])?;
    let ok = (a.objective_value - b.objective_value).abs() <= 1e-9;
    Ok(OracleCheck {
        name: name.to_string(),
        branch_and_bound: a.objective_value,
        brute_force: b.objective_value,
        strategies_match: a.strategy == b.strategy,
        ok,
    })
}

/// Cross-checks the exact solver against exhaustive enumeration on the
/// overall objective and every applicable compromise family. Ideals for the
/// compromise checks come from enumeration too.
pub fn oracle(wb: &Workbench) -> Result<Vec<OracleCheck>> {
    let inst = &wb.instance;
    let overall = linearize(inst, &DashboardObjective::overall(), None)?;
    let mut checks = vec![compare("overall", inst, &Goal::Maximize(overall))?];
    let mut kinds = vec![CpKind::Cpl, CpKind::Cpo, CpKind::Cpol];
    if wb.stakeholders.is_some() {
        kinds.push(CpKind::Cpk);
    }
    for kind in kinds {
        let sh = wb.stakeholders.as_ref();
        let mut devs = Vec::new();
        for m in family(inst, kind, sh)? {
            let obj: LinearObjective = linearize(inst, &m.objective, sh)?;
            let ideal = brute_force(inst, &Goal::Maximize(obj.clone()), &[])?.objective_value;
            if ideal > 0.0 {
                devs.push(Deviation::new(obj, ideal));
            }
        }
        if devs.is_empty() {
            continue;
        }
        checks.push(compare(kind.name(), inst, &Goal::Minimax(devs))?);
    }
    if let Some(bad) = checks.iter().find(|c| !c.ok) {
        return Err(ServiceError::Mismatch(format!(
            "{}: branch and bound {} vs brute force {}",
            bad.name, bad.branch_and_bound, bad.brute_force
        )));
    }
    Ok(checks)
}

pub fn start_session(wb: &Workbench, formulation: Formulation, sample_size: usize) -> Result<ImoSession> {
    let scheme = wb
        .thresholds
        .clone()
        .ok_or_else(|| ServiceError::Usage("the instance has no thresholds block".into()))?;
    Ok(ImoSession::start(
        wb.instance.clone(),
        formulation,
        scheme,
        sample_size,
    )?)
}

pub fn replay_session(wb: &Workbench, journal: &Journal) -> Result<ImoSession> {
    let scheme = wb
        .thresholds
        .clone()
        .ok_or_else(|| ServiceError::Usage("the instance has no thresholds block".into()))?;
    Ok(ImoSession::replay(wb.instance.clone(), scheme, journal)?)
}

/// The final report for a chosen strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalReport {
    pub strategy: Strategy,
    pub activations: Vec<NamedActivation>,
    pub overall: f64,
    pub tables: Vec<DashboardTable>,
}

pub fn final_report(wb: &Workbench, strategy: &Strategy) -> Result<FinalReport> {
    Ok(FinalReport {
        strategy: strategy.clone(),
        activations: named(&wb.instance, strategy),
        overall: overall_value(&wb.instance, strategy)?,
        tables: full_report(&wb.instance, strategy, wb.stakeholders.as_ref())?,
    })
}
