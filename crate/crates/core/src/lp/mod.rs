//! Continuous budget allocation and the simplex solver behind it.

mod budget;
pub mod simplex;

pub use budget::{
    build_program, check_allocation, solve_lp, solve_whole, BudgetAllocation, BudgetBounds, BudgetProgram, LpOutcome,
    ALLOCATION_TOLERANCE,
};
pub use simplex::{LinearProgram, LpSolution, Row, RowKind};
