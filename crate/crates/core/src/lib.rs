//! Upper-crossing/solution (US) root finding.
//!
//! Each US iteration replaces `g` by a surrogate `U(θ | θ_t)` that agrees with
//! `g` at the current iterate and crosses zero no later than `g` does; solving
//! the surrogate gives the next iterate. Under the sign convention `g > 0` left
//! of the root and `g < 0` right of it, the iterates approach the root
//! monotonically from whichever side they start on.

pub mod bound;
pub mod domain;
pub mod error;
pub mod experiments;
pub mod mle;
pub mod multiroot;
pub mod objective;
pub mod poly;
pub mod pvalues;
pub mod quantiles;
pub mod rate;
pub mod solver;
pub mod special;

pub use bound::BoundSpec;
pub use domain::Domain;
pub use error::{AppError, SolverError};
pub use objective::{evaluator, orient, Evaluator, Objective, OrientedObjective};
pub use rate::{estimate_rate, theoretical_rate};
pub use solver::{
    bisection_solve, fill_reference, newton_solve, select_directed_root, select_directed_root_theta, us_solve,
    us_solve_with, us_step_flb, us_step_slub, us_step_tlb, ClosedFormStep, IterationRecord, SolveOptions, SolveResult,
    SolveStatus, UpdateRule,
};
