use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// What kind of invariant a [`ValidationError`] reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationKind {
    WeightSum,
    NegativeValue,
    NonPositiveCost,
    MissingEvaluation,
    PrecedenceCycle,
    DuplicateId,
    UnknownIndex,
    Shape,
    BoundOrder,
    Probability,
    TreeDepth,
    Thresholds,
}

/// A single violated invariant, located by a JSON-pointer style path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationError {
    pub kind: ValidationKind,
    pub pointer: String,
    pub message: String,
}

impl ValidationError {
    pub fn new(kind: ValidationKind, pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind,
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pointer, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation failed: {}", join(.0))]
    Validation(Vec<ValidationError>),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("instance too large for exhaustive search ({candidates} candidates, limit {limit})")]
    InstanceTooLarge { candidates: f64, limit: f64 },
    #[error("ideal value is zero for {0}; relative deviation undefined")]
    ZeroIdeal(String),
    #[error("invalid axis selection: {0}")]
    Axes(String),
    #[error("stakeholder set required for {0}")]
    MissingStakeholders(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("no feasible strategy satisfies the accumulated constraints")]
    EmptyRegion,
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("invalid labels: {0}")]
    Labels(String),
    #[error("unknown rule id {0}")]
    UnknownRule(String),
    #[error("unknown strategy id {0}")]
    UnknownStrategy(String),
    #[error("journal replay diverged: {0}")]
    Replay(String),
}

fn join(errors: &[ValidationError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

/// Formats a real for messages: rounded to 1e-9 with trailing zeros trimmed.
pub(crate) fn fmt_num(value: f64) -> String {
    let s = format!("{:.9}", value);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_num;

    #[test]
    fn trims_numbers() {
        assert_eq!(fmt_num(0.5 + 0.3 + 0.3), "1.1");
        assert_eq!(fmt_num(400.0), "400");
        assert_eq!(fmt_num(-0.0), "0");
    }
}
