//! The single-file JSON instance format. Every index inside the file
//! (precedence pairs, tree scopes, bound rows) is 0-based and follows the
//! order of the `meta` id lists.

use std::path::Path;

use serde::{Deserialize, Serialize};
use stplan_core::dashboard::StakeholderSet;
use stplan_core::imo::{Boundary, ThresholdScheme};
use stplan_core::lp::BudgetBounds;
use stplan_core::uncertainty::{expected_evaluation, expected_instance, ScenarioTree, PROBABILITY_TOLERANCE};
use stplan_core::{validate_instance, Error as CoreError, Item, Precedence, ProblemInstance, RawInstance};
use stplan_core::{ValidationError, ValidationKind};

use crate::error::{from_json, Result, ServiceError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub meta: Meta,
    /// `evaluations[i][j][l]`
    pub evaluations: Vec<Vec<Vec<f64>>>,
    pub costs: Vec<f64>,
    /// One budget per decision period `0..horizon`.
    pub budgets: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub precedence: Vec<Precedence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous: Option<ContinuousBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncertainty: Option<UncertaintyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stakeholders: Option<StakeholderBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default)]
    pub name: String,
    pub facilities: Vec<Item>,
    pub locations: Vec<Item>,
    pub criteria: Vec<Item>,
    pub horizon: usize,
    pub interest_rate: f64,
}

/// Budget bounds of the continuous model, `[index][period]`, `null` for
/// unconstrained. An empty matrix means no bounds of that kind.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuousBlock {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub facility_max: Vec<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub facility_min: Vec<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub location_max: Vec<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub location_min: Vec<Vec<Option<f64>>>,
}

fn default_tolerance() -> f64 {
    PROBABILITY_TOLERANCE
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UncertaintyBlock {
    /// Allowed deviation of sibling probabilities from 1.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub trees: Vec<ScenarioTree>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StakeholderBlock {
    pub members: Vec<Item>,
    /// `criterion_weights[k][j]`
    pub criterion_weights: Vec<Vec<f64>>,
    pub planner_weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdBlock {
    /// One label per satisfaction class, lowest first.
    pub labels: Vec<String>,
    /// `values[j][l]`: ascending thresholds.
    pub values: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub boundary: Boundary,
}

/// A validated instance file.
#[derive(Clone, Debug, PartialEq)]
pub struct Workbench {
    pub name: String,
    pub instance: ProblemInstance,
    pub bounds: Option<BudgetBounds>,
    /// Non-fatal remarks about the file, e.g. redundant bounds.
    pub warnings: Vec<String>,
    pub trees: Vec<ScenarioTree>,
    pub tree_tolerance: f64,
    pub stakeholders: Option<StakeholderSet>,
    pub thresholds: Option<ThresholdScheme>,
}

fn bounds_from_matrix(
    rows: &[Vec<Option<f64>>],
    name: &str,
    len: usize,
    horizon: usize,
    errors: &mut Vec<ValidationError>,
) -> std::collections::BTreeMap<(usize, usize), f64> {
    let mut out = std::collections::BTreeMap::new();
    if rows.is_empty() {
        return out;
    }
    if rows.len() != len {
        errors.push(ValidationError::new(
            ValidationKind::Shape,
            format!("/continuous/{name}"),
            format!("expected {len} rows, found {}", rows.len()),
        ));
    }
    for (k, row) in rows.iter().enumerate() {
        if row.len() != horizon {
            errors.push(ValidationError::new(
                ValidationKind::Shape,
                format!("/continuous/{name}/{k}"),
                format!("expected {horizon} periods, found {}", row.len()),
            ));
        }
        for (t, v) in row.iter().enumerate() {
            if let Some(v) = v {
                out.insert((k, t), *v);
            }
        }
    }
    out
}

fn matrix_from_bounds(
    map: &std::collections::BTreeMap<(usize, usize), f64>,
    len: usize,
    horizon: usize,
) -> Vec<Vec<Option<f64>>> {
    if map.is_empty() {
        return Vec::new();
    }
    (0..len)
        .map(|k| (0..horizon).map(|t| map.get(&(k, t)).copied()).collect())
        .collect()
}

fn validation(err: CoreError) -> Vec<ValidationError> {
    match err {
        CoreError::Validation(errors) => errors,
        other => vec![ValidationError::new(ValidationKind::Shape, "", other.to_string())],
    }
}

impl Workbench {
    pub fn from_file(file: InstanceFile) -> Result<Self> {
        let raw = RawInstance {
            facilities: file.meta.facilities,
            locations: file.meta.locations,
            criteria: file.meta.criteria,
            horizon: file.meta.horizon,
            evaluations: file.evaluations,
            costs: file.costs,
            budgets: file.budgets,
            weights: file.weights,
            interest_rate: file.meta.interest_rate,
            precedence: file.precedence,
        };
        let instance = validate_instance(raw).map_err(ServiceError::validation)?;
        let (n, m, p, q) = (
            instance.num_facilities(),
            instance.num_locations(),
            instance.horizon(),
            instance.num_criteria(),
        );
        let mut errors = Vec::new();
        let mut warnings = Vec::new();

        let bounds = file.continuous.map(|c| {
            let b = BudgetBounds {
                facility_max: bounds_from_matrix(&c.facility_max, "facility_max", n, p, &mut errors),
                facility_min: bounds_from_matrix(&c.facility_min, "facility_min", n, p, &mut errors),
                location_max: bounds_from_matrix(&c.location_max, "location_max", m, p, &mut errors),
                location_min: bounds_from_matrix(&c.location_min, "location_min", m, p, &mut errors),
            };
            match b.validate(&instance) {
                Ok(w) => warnings.extend(w),
                Err(e) => errors.extend(e),
            }
            b
        });

        let (trees, tree_tolerance) = match file.uncertainty {
            Some(u) => {
                if !(u.tolerance >= 0.0 && u.tolerance < 1.0) {
                    errors.push(ValidationError::new(
                        ValidationKind::Probability,
                        "/uncertainty/tolerance",
                        format!("tolerance must lie in [0, 1), found {}", u.tolerance),
                    ));
                } else if let Err(e) = expected_evaluation(&instance, &u.trees, u.tolerance) {
                    errors.extend(validation(e).into_iter().map(|mut e| {
                        e.pointer = e.pointer.replacen("/uncertainty/", "/uncertainty/trees/", 1);
                        e
                    }));
                }
                (u.trees, u.tolerance)
            }
            None => (Vec::new(), PROBABILITY_TOLERANCE),
        };

        let stakeholders = file.stakeholders.and_then(|s| {
            StakeholderSet::new(s.members, s.criterion_weights, s.planner_weights, q)
                .map_err(|e| errors.extend(e))
                .ok()
        });

        let thresholds = file
            .thresholds
            .and_then(|t| match ThresholdScheme::new(t.labels, t.values, t.boundary) {
                Ok(scheme) => match scheme.check(&instance) {
                    Ok(()) => Some(scheme),
                    Err(e) => {
                        errors.extend(validation(e));
                        None
                    }
                },
                Err(e) => {
                    errors.extend(e);
                    None
                }
            });

        if !errors.is_empty() {
            return Err(ServiceError::validation(errors));
        }
        Ok(Workbench {
            name: file.meta.name,
            instance,
            bounds,
            warnings,
            trees,
            tree_tolerance,
            stakeholders,
            thresholds,
        })
    }

    /// Canonical file form.
    pub fn to_file(&self) -> InstanceFile {
        let raw = self.instance.to_raw();
        let (n, m, p) = (raw.facilities.len(), raw.locations.len(), raw.horizon);
        InstanceFile {
            meta: Meta {
                name: self.name.clone(),
                facilities: raw.facilities,
                locations: raw.locations,
                criteria: raw.criteria,
                horizon: raw.horizon,
                interest_rate: raw.interest_rate,
            },
            evaluations: raw.evaluations,
            costs: raw.costs,
            budgets: raw.budgets,
            weights: raw.weights,
            precedence: raw.precedence,
            continuous: self.bounds.as_ref().map(|b| ContinuousBlock {
                facility_max: matrix_from_bounds(&b.facility_max, n, p),
                facility_min: matrix_from_bounds(&b.facility_min, n, p),
                location_max: matrix_from_bounds(&b.location_max, m, p),
                location_min: matrix_from_bounds(&b.location_min, m, p),
            }),
            uncertainty: (!self.trees.is_empty()).then(|| UncertaintyBlock {
                tolerance: self.tree_tolerance,
                trees: self.trees.clone(),
            }),
            stakeholders: self.stakeholders.as_ref().map(|s| StakeholderBlock {
                members: s.stakeholders().to_vec(),
                criterion_weights: s.criterion_weights().to_vec(),
                planner_weights: s.planner_weights().to_vec(),
            }),
            thresholds: self.thresholds.as_ref().map(|t| ThresholdBlock {
                labels: t.labels().to_vec(),
                values: t.values().to_vec(),
                boundary: t.boundary(),
            }),
        }
    }

    /// The instance with every uncertain evaluation replaced by its
    /// expectation; the instance itself when there are no trees.
    pub fn expected_instance(&self) -> Result<ProblemInstance> {
        Ok(expected_instance(&self.instance, &self.trees, self.tree_tolerance)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("instance file serializes");
        s.push('\n');
        s
    }
}

pub fn parse_instance(text: &str) -> Result<Workbench> {
    Workbench::from_file(from_json(text)?)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Workbench> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ServiceError::io(path.display().to_string(), e))?;
    parse_instance(&text)
}
