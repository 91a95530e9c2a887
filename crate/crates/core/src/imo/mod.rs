//! Interactive multiobjective search guided by decision rules.
//!
//! Strategies are judged on counts of facilities reaching qualitative
//! satisfaction levels. The decision maker labels a sample as good or other,
//! rules explaining the good ones are induced, and the chosen rule becomes a
//! set of constraints on the next sample.

mod rules;
mod session;
mod thresholds;

pub use rules::{induce_rules, lower_approximation, Condition, DecisionRule, Label, LabeledItem, LabeledSample};
pub use session::{
    sample_representatives, ImoSession, Iteration, Journal, SampleItem, SessionConstraint, SessionEvent, SessionRule,
    SessionState, SessionView, DEFAULT_SAMPLE_SIZE,
};
pub use thresholds::{
    attainment_counts, classify, count_vector, formulation_objectives, objective_labels, AttainmentCounts, Boundary,
    Formulation, ThresholdScheme,
};
