//! Space-time planning of facility activations: which facilities to activate,
//! where, and when, under per-period budgets.
//!
//! The crate is organised bottom-up:
//!
//! * [`instance`] holds the validated problem data and strategy feasibility;
//! * [`dashboard`] computes every aggregate performance table of a strategy;
//! * [`solver`] is the exact 0-1 optimizer (branch and bound, minimax,
//!   non-dominated enumeration, brute force);
//! * [`lp`] is the continuous budget-allocation variant and its simplex;
//! * [`compromise`] builds ideal points and minimax compromise solutions;
//! * [`imo`] is the interactive rule-based search with a decision maker;
//! * [`uncertainty`] handles scenario trees and expected evaluations.

pub mod compromise;
pub mod dashboard;
pub mod error;
pub mod imo;
pub mod instance;
pub mod lp;
pub mod solver;
pub mod uncertainty;

#[cfg(test)]
pub(crate) mod testing;

pub use error::{Error, Result, ValidationError, ValidationKind};
pub use instance::{
    check_feasibility, discount_factor, validate_instance, Activation, FeasibilityReport, Item, Precedence,
    ProblemInstance, RawInstance, Strategy, Violation, ViolationKind,
};
