use thiserror::Error;

use crate::solver::SolveStatus;
use crate::special::SpecialError;

/// Errors raised by the solver engine for invalid inputs or failed steps.
///
/// Iteration outcomes such as hitting `max_iter` are not errors; they are
/// reported through [`crate::SolveStatus`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid domain: lo = {lo}, hi = {hi}")]
    InvalidDomain { lo: f64, hi: f64 },
    #[error("invalid solve options: {0}")]
    InvalidOptions(&'static str),
    #[error("invalid bound: {0}")]
    InvalidBound(&'static str),
    #[error("initial value {0} lies outside the domain")]
    StartOutsideDomain(f64),
    #[error("objective is not finite at {0}")]
    NonFiniteEvaluation(f64),
    #[error("objective changes sign {0} times on the probe grid; use the multi-root sweep")]
    AmbiguousOrientation(usize),
    #[error("no admissible root of the surrogate equation in the move direction")]
    NoAdmissibleStep,
    #[error("surrogate solution {0} leaves the domain")]
    DomainEscape(f64),
    #[error("g(lo) and g(hi) must have opposite signs (got {g_lo}, {g_hi})")]
    BracketInvalid { g_lo: f64, g_hi: f64 },
    #[error("trace has too few usable records for the rate estimate")]
    InsufficientTrace,
    #[error("missing derivative of order {0}")]
    MissingDerivative(u8),
}

/// Errors raised by the application layer (quantiles, p-values, fits, sweeps,
/// experiments).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AppError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("no root: {0}")]
    NoRoot(&'static str),
    #[error("degenerate sample: {0}")]
    DegenerateSample(&'static str),
    #[error("no convergence after {0} iterations")]
    NonConvergence(usize),
    #[error("more than {0} roots on the interval")]
    MaxRootsExceeded(usize),
    #[error("sub-solve {index} of the sweep ended with status {status}")]
    SweepFailed { index: usize, status: SolveStatus },
    #[error("unknown problem: {0}")]
    UnknownProblem(String),
    #[error("unknown algorithm: {0}")]
    UnknownAlgorithm(String),
}

impl AppError {
    /// Short variant name used for status reporting.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Solver(_) => "SolverError",
            Self::Special(_) => "SpecialError",
            Self::DomainError(_) => "DomainError",
            Self::NoRoot(_) => "NoRoot",
            Self::DegenerateSample(_) => "DegenerateSample",
            Self::NonConvergence(_) => "NonConvergence",
            Self::MaxRootsExceeded(_) => "MaxRootsExceeded",
            Self::SweepFailed { .. } => "SweepFailed",
            Self::UnknownProblem(_) => "UnknownProblem",
            Self::UnknownAlgorithm(_) => "UnknownAlgorithm",
        }
    }
}
