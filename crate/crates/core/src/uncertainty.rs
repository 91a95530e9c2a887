//! Scenario trees over states of nature and expected evaluations.
//!
//! A tree describes how one evaluation `y_ijl` may evolve: the root is the
//! known state at period 0, each node at depth `t` is a state in period `t`
//! with a probability conditional on its parent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError, ValidationKind};
use crate::instance::ProblemInstance;

/// Tolerance for sibling probabilities of generated trees.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// The evaluation a tree applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scope {
    pub facility: usize,
    pub criterion: usize,
    pub location: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioNode {
    #[serde(default)]
    pub label: String,
    /// Probability conditional on the parent state; 1 at the root.
    pub probability: f64,
    pub performance: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ScenarioNode>,
}

impl ScenarioNode {
    pub fn leaf(label: impl Into<String>, probability: f64, performance: f64) -> Self {
        Self {
            label: label.into(),
            probability,
            performance,
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<ScenarioNode>) -> Self {
        self.children = children;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioTree {
    pub scope: Scope,
    pub root: ScenarioNode,
}

impl ScenarioTree {
    pub fn new(scope: Scope, root: ScenarioNode) -> Self {
        Self { scope, root }
    }

    /// Length of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn depth(n: &ScenarioNode) -> usize {
            n.children.iter().map(|c| 1 + depth(c)).max().unwrap_or(0)
        }
        depth(&self.root)
    }

    /// `(path probability, node)` for every node at depth `t`.
    pub fn states(&self, t: usize) -> Vec<(f64, &ScenarioNode)> {
        let mut level = vec![(1.0, &self.root)];
        for _ in 0..t {
            level = level
                .into_iter()
                .flat_map(|(p, n)| n.children.iter().map(move |c| (p * c.probability, c)))
                .collect();
        }
        level
    }

    /// Node reached by following child indices from the root.
    pub fn node(&self, path: &[usize]) -> Option<&ScenarioNode> {
        path.iter().try_fold(&self.root, |n, &k| n.children.get(k))
    }
}

/// Checks sibling normalization within `tolerance`, probabilities in [0, 1],
/// non-negative performances and that every leaf sits at depth `horizon`.
pub fn validate_tree(tree: &ScenarioTree, horizon: usize, tolerance: f64) -> Vec<ValidationError> {
    fn walk(
        n: &ScenarioNode,
        pointer: &str,
        depth: usize,
        horizon: usize,
        tolerance: f64,
        errors: &mut Vec<ValidationError>,
    ) {
        if !(n.performance.is_finite() && n.performance >= 0.0) {
            errors.push(ValidationError::new(
                ValidationKind::NegativeValue,
                format!("{pointer}/performance"),
                format!("performance {} must be a non-negative number", n.performance),
            ));
        }
        if !(0.0..=1.0).contains(&n.probability) {
            errors.push(ValidationError::new(
                ValidationKind::Probability,
                format!("{pointer}/probability"),
                format!("probability {} outside [0, 1]", n.probability),
            ));
        }
        if n.children.is_empty() {
            if depth != horizon {
                errors.push(ValidationError::new(
                    ValidationKind::TreeDepth,
                    pointer,
                    format!("leaf at period {depth}, expected {horizon}"),
                ));
            }
            return;
        }
        if depth >= horizon {
            errors.push(ValidationError::new(
                ValidationKind::TreeDepth,
                format!("{pointer}/children"),
                format!("states beyond period {horizon}"),
            ));
            return;
        }
        let total: f64 = n.children.iter().map(|c| c.probability).sum();
        if (total - 1.0).abs() > tolerance {
            errors.push(ValidationError::new(
                ValidationKind::Probability,
                format!("{pointer}/children"),
                format!("conditional probabilities sum to {total}, expected 1"),
            ));
        }
        for (k, c) in n.children.iter().enumerate() {
            walk(
                c,
                &format!("{pointer}/children/{k}"),
                depth + 1,
                horizon,
                tolerance,
                errors,
            );
        }
    }
    let mut errors = Vec::new();
    walk(&tree.root, "/root", 0, horizon, tolerance, &mut errors);
    errors
}

/// Product of conditional probabilities along `path`; 1 for the root.
pub fn path_probability(tree: &ScenarioTree, path: &[usize]) -> Result<f64> {
    let mut node = &tree.root;
    let mut p = 1.0;
    for (d, &k) in path.iter().enumerate() {
        node = node
            .children
            .get(k)
            .ok_or_else(|| Error::IndexOutOfRange(format!("child {k} at depth {}", d + 1)))?;
        p *= node.probability;
    }
    Ok(p)
}

/// Probability-weighted mean performance of the states at depth `t`.
pub fn expected_performance(tree: &ScenarioTree, t: usize) -> f64 {
    tree.states(t).into_iter().map(|(p, n)| p * n.performance).sum()
}

/// `E[y_ijlt]` for every evaluation and accrual period `t` in `1..=p`;
/// evaluations without a tree keep their deterministic value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedEvaluation {
    /// (facilities, criteria, locations, periods)
    dims: (usize, usize, usize, usize),
    values: Vec<f64>,
}

impl ExpectedEvaluation {
    pub fn get(&self, i: usize, j: usize, l: usize, t: usize) -> f64 {
        let (_, q, m, p) = self.dims;
        self.values[((i * q + j) * m + l) * p + (t - 1)]
    }
}

pub fn expected_evaluation(
    instance: &ProblemInstance,
    trees: &[ScenarioTree],
    tolerance: f64,
) -> Result<ExpectedEvaluation> {
    let (n, q, m, p) = (
        instance.num_facilities(),
        instance.num_criteria(),
        instance.num_locations(),
        instance.horizon(),
    );
    let mut errors = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (k, tree) in trees.iter().enumerate() {
        let s = tree.scope;
        if s.facility >= n || s.criterion >= q || s.location >= m {
            errors.push(ValidationError::new(
                ValidationKind::UnknownIndex,
                format!("/uncertainty/{k}/scope"),
                format!(
                    "scope ({}, {}, {}) outside the instance",
                    s.facility, s.criterion, s.location
                ),
            ));
            continue;
        }
        if !seen.insert(s) {
            errors.push(ValidationError::new(
                ValidationKind::DuplicateId,
                format!("/uncertainty/{k}/scope"),
                "second tree for the same evaluation",
            ));
        }
        errors.extend(validate_tree(tree, p, tolerance).into_iter().map(|mut e| {
            e.pointer = format!("/uncertainty/{k}{}", e.pointer);
            e
        }));
    }
    if !errors.is_empty() {
        return Err(Error::Validation(errors));
    }

    let mut values = Vec::with_capacity(n * q * m * p);
    for i in 0..n {
        for j in 0..q {
            for l in 0..m {
                values.extend(std::iter::repeat_n(instance.evaluation(i, j, l), p));
            }
        }
    }
    for tree in trees {
        let s = tree.scope;
        for t in 1..=p {
            values[((s.facility * q + s.criterion) * m + s.location) * p + (t - 1)] = expected_performance(tree, t);
        }
    }
    Ok(ExpectedEvaluation {
        dims: (n, q, m, p),
        values,
    })
}

/// The instance in which every accrued evaluation is its expectation, ready
/// for the dashboard and every solver.
pub fn expected_instance(
    instance: &ProblemInstance,
    trees: &[ScenarioTree],
    tolerance: f64,
) -> Result<ProblemInstance> {
    if trees.is_empty() {
        return Ok(instance.clone());
    }
    let e = expected_evaluation(instance, trees, tolerance)?;
    Ok(instance.with_period_evaluations(|i, j, l, t| e.get(i, j, l, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::council;

    fn scope() -> Scope {
        Scope {
            facility: 7,
            criterion: 0,
            location: 0,
        }
    }

    fn figure_tree() -> ScenarioTree {
        let root = ScenarioNode::leaf("s0", 1.0, 30.0).with_children(vec![
            ScenarioNode::leaf("s1", 0.3, 30.0).with_children(vec![
                ScenarioNode::leaf("s11", 0.2, 20.0),
                ScenarioNode::leaf("s12", 0.8, 40.0),
            ]),
            ScenarioNode::leaf("s2", 0.7, 60.0).with_children(vec![
                ScenarioNode::leaf("s21", 0.6, 60.0),
                ScenarioNode::leaf("s22", 0.4, 50.0),
            ]),
        ]);
        ScenarioTree::new(scope(), root)
    }

    #[test]
    fn two_period_expectation() {
        let tree = figure_tree();
        assert!(validate_tree(&tree, 2, PROBABILITY_TOLERANCE).is_empty());
        assert!((expected_performance(&tree, 2) - 50.0).abs() < 1e-12);
        assert!((path_probability(&tree, &[1, 0]).unwrap() - 0.42).abs() < 1e-12);
        assert_eq!(path_probability(&tree, &[]).unwrap(), 1.0);
        assert!(path_probability(&tree, &[2]).is_err());
    }

    #[test]
    fn chain_probability() {
        let mut node = ScenarioNode::leaf("leaf", 0.25, 1.0);
        for p in [0.6, 0.3, 0.65, 0.8] {
            node = ScenarioNode::leaf("", p, 1.0).with_children(vec![node, ScenarioNode::leaf("", 0.0, 0.0)]);
        }
        let tree = ScenarioTree::new(scope(), ScenarioNode::leaf("", 1.0, 1.0).with_children(vec![node]));
        assert!((path_probability(&tree, &[0, 0, 0, 0, 0]).unwrap() - 0.0234).abs() < 1e-12);
    }

    #[test]
    fn invalid_trees() {
        let mut tree = figure_tree();
        tree.root.children[0].children[0].probability = 0.5;
        tree.root.children[0].children[1].probability = 0.6;
        let errs = validate_tree(&tree, 2, PROBABILITY_TOLERANCE);
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].kind, ValidationKind::Probability);
        assert_eq!(errs[0].pointer, "/root/children/0/children");

        let mut tree = figure_tree();
        tree.root.children[1].children.clear();
        let errs = validate_tree(&tree, 2, PROBABILITY_TOLERANCE);
        assert_eq!(errs[0].kind, ValidationKind::TreeDepth);

        let mut tree = figure_tree();
        tree.root.children[1].performance = -1.0;
        assert_eq!(
            validate_tree(&tree, 2, PROBABILITY_TOLERANCE)[0].kind,
            ValidationKind::NegativeValue
        );
    }

    #[test]
    fn expected_instance_replaces_one_evaluation() {
        let inst = council();
        assert_eq!(expected_instance(&inst, &[], 1e-9).unwrap(), inst);
        // a depth-5 chain at constant 70 on (Social Housing, econ, north)
        let mut node = ScenarioNode::leaf("", 1.0, 70.0);
        for _ in 0..4 {
            node = ScenarioNode::leaf("", 1.0, 70.0).with_children(vec![node]);
        }
        let tree = ScenarioTree::new(scope(), ScenarioNode::leaf("", 1.0, 12.0).with_children(vec![node]));
        let e = expected_instance(&inst, std::slice::from_ref(&tree), 1e-9).unwrap();
        assert_eq!(e.accrued(7, 0, 0, 3), 70.0);
        assert_eq!(e.accrued(7, 0, 1, 3), inst.evaluation(7, 0, 1));
        assert_eq!(e.accrued(0, 1, 0, 5), inst.evaluation(0, 1, 0));

        let short = figure_tree();
        assert!(matches!(
            expected_instance(&inst, &[short], 1e-9),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            expected_instance(&inst, &[tree.clone(), tree], 1e-9),
            Err(Error::Validation(_))
        ));
    }
}
