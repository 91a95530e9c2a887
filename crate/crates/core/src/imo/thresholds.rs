//! Qualitative satisfaction classes and attainment counts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError, ValidationKind};
use crate::instance::{ProblemInstance, Strategy};
use crate::solver::{LinearObjective, Sense};

/// Which side of a threshold a value equal to it falls on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// `y >= s` reaches the level.
    #[default]
    Inclusive,
    /// Only `y > s` reaches the level.
    Exclusive,
}

/// Ascending thresholds per (criterion, location), all with the same number
/// of levels, plus one label per resulting class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdScheme {
    labels: Vec<String>,
    /// `values[j][l][a]`
    values: Vec<Vec<Vec<f64>>>,
    boundary: Boundary,
}

impl ThresholdScheme {
    pub fn new(
        labels: Vec<String>,
        values: Vec<Vec<Vec<f64>>>,
        boundary: Boundary,
    ) -> std::result::Result<Self, Vec<ValidationError>> {
        let mut errors = Vec::new();
        let levels = values.first().and_then(|row| row.first()).map_or(0, Vec::len);
        if levels == 0 {
            errors.push(ValidationError::new(
                ValidationKind::Thresholds,
                "/thresholds/values",
                "at least one threshold level is required",
            ));
        }
        for (j, row) in values.iter().enumerate() {
            for (l, s) in row.iter().enumerate() {
                let pointer = format!("/thresholds/values/{j}/{l}");
                if s.len() != levels {
                    errors.push(ValidationError::new(
                        ValidationKind::Thresholds,
                        &pointer,
                        format!("{} levels, expected {levels}", s.len()),
                    ));
                }
                if s.iter().any(|v| !v.is_finite()) {
                    errors.push(ValidationError::new(
                        ValidationKind::Thresholds,
                        &pointer,
                        "non-finite threshold",
                    ));
                } else if s.windows(2).any(|w| w[0] >= w[1]) {
                    errors.push(ValidationError::new(
                        ValidationKind::Thresholds,
                        &pointer,
                        "thresholds must be strictly ascending",
                    ));
                }
            }
        }
        if levels > 0 && labels.len() != levels + 1 {
            errors.push(ValidationError::new(
                ValidationKind::Thresholds,
                "/thresholds/labels",
                format!("{} labels for {} classes", labels.len(), levels + 1),
            ));
        }
        if errors.is_empty() {
            Ok(Self {
                labels,
                values,
                boundary,
            })
        } else {
            Err(errors)
        }
    }

    /// The same thresholds for every (criterion, location).
    pub fn uniform(
        labels: Vec<String>,
        thresholds: &[f64],
        num_criteria: usize,
        num_locations: usize,
        boundary: Boundary,
    ) -> std::result::Result<Self, Vec<ValidationError>> {
        let values = vec![vec![thresholds.to_vec(); num_locations]; num_criteria];
        Self::new(labels, values, boundary)
    }

    /// Number of threshold levels J(h).
    pub fn levels(&self) -> usize {
        self.values[0][0].len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, class: usize) -> &str {
        &self.labels[class - 1]
    }

    pub fn thresholds(&self, j: usize, l: usize) -> &[f64] {
        &self.values[j][l]
    }

    pub fn values(&self) -> &[Vec<Vec<f64>>] {
        &self.values
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Class of `y` for (criterion, location), 1-based.
    pub fn classify(&self, y: f64, j: usize, l: usize) -> usize {
        classify(y, self.thresholds(j, l), self.boundary)
    }

    /// Whether `y` reaches level `a` (0-based) for (criterion, location).
    pub fn attains(&self, y: f64, a: usize, j: usize, l: usize) -> bool {
        self.classify(y, j, l) > a + 1
    }

    pub fn check(&self, instance: &ProblemInstance) -> Result<()> {
        let shape_ok = self.values.len() == instance.num_criteria()
            && self.values.iter().all(|row| row.len() == instance.num_locations());
        if shape_ok {
            Ok(())
        } else {
            Err(Error::Validation(vec![ValidationError::new(
                ValidationKind::Shape,
                "/thresholds/values",
                format!(
                    "thresholds must be given for {} criteria x {} locations",
                    instance.num_criteria(),
                    instance.num_locations()
                ),
            )]))
        }
    }
}

/// 1-based class index of `y`: 1 below the first threshold, `len + 1` at or
/// above the last (strictly above with [`Boundary::Exclusive`]).
pub fn classify(y: f64, thresholds: &[f64], boundary: Boundary) -> usize {
    let reached = thresholds
        .iter()
        .filter(|&&s| match boundary {
            Boundary::Inclusive => y >= s,
            Boundary::Exclusive => y > s,
        })
        .count();
    reached + 1
}

/// `F[a][j][l]`: facilities activated at `l` whose evaluation on `j` reaches
/// level `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttainmentCounts {
    counts: Vec<Vec<Vec<usize>>>,
}

impl AttainmentCounts {
    pub fn get(&self, a: usize, j: usize, l: usize) -> usize {
        self.counts[a][j][l]
    }

    /// Sum over criteria for one location.
    pub fn location_sum(&self, a: usize, l: usize) -> usize {
        self.counts[a].iter().map(|row| row[l]).sum()
    }

    /// Sum over locations for one criterion.
    pub fn criterion_sum(&self, a: usize, j: usize) -> usize {
        self.counts[a][j].iter().sum()
    }

    pub fn levels(&self) -> usize {
        self.counts.len()
    }
}

pub fn attainment_counts(
    instance: &ProblemInstance,
    strategy: &Strategy,
    scheme: &ThresholdScheme,
) -> Result<AttainmentCounts> {
    scheme.check(instance)?;
    for a in strategy.activations() {
        instance.check_activation(a)?;
    }
    let (q, m) = (instance.num_criteria(), instance.num_locations());
    let mut counts = vec![vec![vec![0; m]; q]; scheme.levels()];
    for act in strategy.activations() {
        let (i, l) = (act.facility, act.location);
        for j in 0..q {
            let y = instance.evaluation(i, j, l);
            for (a, level) in counts.iter_mut().enumerate() {
                if scheme.attains(y, a, j, l) {
                    level[j][l] += 1;
                }
            }
        }
    }
    Ok(AttainmentCounts { counts })
}

/// How attainment counts are grouped into objectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    /// One objective per (level, location), summed over criteria.
    #[serde(alias = "LOCATION")]
    Location,
    /// One objective per (level, criterion), summed over locations.
    #[serde(alias = "CRITERION")]
    Criterion,
    /// One objective per (level, criterion, location).
    #[serde(alias = "CRITERION_LOCATION")]
    CriterionLocation,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Formulation::Location => "location",
            Formulation::Criterion => "criterion",
            Formulation::CriterionLocation => "criterion-location",
        }
    }

    /// Objective cells in order; level outermost, then criterion, then location.
    fn cells(self, levels: usize, q: usize, m: usize) -> Vec<(usize, Option<usize>, Option<usize>)> {
        let mut out = Vec::new();
        for a in 0..levels {
            match self {
                Formulation::Location => out.extend((0..m).map(|l| (a, None, Some(l)))),
                Formulation::Criterion => out.extend((0..q).map(|j| (a, Some(j), None))),
                Formulation::CriterionLocation => {
                    for j in 0..q {
                        out.extend((0..m).map(|l| (a, Some(j), Some(l))));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formulation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        [
            Formulation::Location,
            Formulation::Criterion,
            Formulation::CriterionLocation,
        ]
        .into_iter()
        .find(|f| f.name() == norm)
        .ok_or_else(|| format!("unknown formulation {s:?}"))
    }
}

/// Gain-type count objectives of `formulation`. The coefficient of `x_ilt` is
/// the number of attainments facility `i` contributes at `l`, whatever `t`.
pub fn formulation_objectives(
    instance: &ProblemInstance,
    formulation: Formulation,
    scheme: &ThresholdScheme,
) -> Result<Vec<LinearObjective>> {
    scheme.check(instance)?;
    let (q, m) = (instance.num_criteria(), instance.num_locations());
    let objectives = formulation
        .cells(scheme.levels(), q, m)
        .into_iter()
        .map(|(a, cj, cl)| {
            LinearObjective::from_fn(instance, Sense::Max, |i, l, _| {
                if cl.is_some_and(|cl| cl != l) {
                    return 0.0;
                }
                let hits = (0..q)
                    .filter(|&j| cj.is_none_or(|cj| cj == j))
                    .filter(|&j| scheme.attains(instance.evaluation(i, j, l), a, j, l))
                    .count();
                hits as f64
            })
        })
        .collect();
    Ok(objectives)
}

/// Display names of the objectives, 1-based: `F{a},{l}`, `F{a},{j}` or
/// `F{a},{j},{l}`.
pub fn objective_labels(instance: &ProblemInstance, formulation: Formulation, scheme: &ThresholdScheme) -> Vec<String> {
    formulation
        .cells(scheme.levels(), instance.num_criteria(), instance.num_locations())
        .into_iter()
        .map(|(a, j, l)| {
            let mut s = format!("F{}", a + 1);
            for idx in [j, l].into_iter().flatten() {
                s.push_str(&format!(",{}", idx + 1));
            }
            s
        })
        .collect()
}

/// The objective vector of `strategy`, computed from attainment counts.
pub fn count_vector(
    instance: &ProblemInstance,
    formulation: Formulation,
    scheme: &ThresholdScheme,
    strategy: &Strategy,
) -> Result<Vec<f64>> {
    let counts = attainment_counts(instance, strategy, scheme)?;
    let (q, m) = (instance.num_criteria(), instance.num_locations());
    Ok(formulation
        .cells(scheme.levels(), q, m)
        .into_iter()
        .map(|cell| {
            let v = match cell {
                (a, None, Some(l)) => counts.location_sum(a, l),
                (a, Some(j), None) => counts.criterion_sum(a, j),
                (a, Some(j), Some(l)) => counts.get(a, j, l),
                _ => unreachable!("every cell names a criterion or a location"),
            };
            v as f64
        })
        .collect())
}
