use std::fmt;

use crate::error::SolverError;
use crate::objective::{Evaluator, OrientedObjective};

/// Recipe for building the surrogate U-function at the current iterate.
#[derive(Clone)]
pub enum BoundSpec {
    /// Constant first-derivative lower bound `b(θ) = b1 < 0`.
    FlbConstant { b1: f64 },
    /// Linear first-derivative lower bound `b(θ) = b1 + b2·θ`.
    FlbLinear { b1: f64, b2: f64 },
    /// General first-derivative lower bound `b` with antiderivative `big_b`.
    FlbCustom {
        b: Evaluator,
        big_b: Evaluator,
        strictly_negative: bool,
    },
    /// Second-derivative bounds `b21 ≤ g″ ≤ b22`.
    Slub { b21: f64, b22: f64 },
    /// Third-derivative lower bound `b3 ≤ g‴`.
    Tlb { b3: f64 },
}

impl fmt::Debug for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FlbConstant { b1 } => write!(f, "FlbConstant {{ b1: {b1} }}"),
            Self::FlbLinear { b1, b2 } => write!(f, "FlbLinear {{ b1: {b1}, b2: {b2} }}"),
            Self::FlbCustom { strictly_negative, .. } => {
                write!(f, "FlbCustom {{ strictly_negative: {strictly_negative} }}")
            }
            Self::Slub { b21, b22 } => write!(f, "Slub {{ b21: {b21}, b22: {b22} }}"),
            Self::Tlb { b3 } => write!(f, "Tlb {{ b3: {b3} }}"),
        }
    }
}

impl BoundSpec {
    /// Custom FLB from a bound function and its antiderivative; `b` must be
    /// strictly negative on the domain.
    pub fn flb_custom<B, A>(b: B, big_b: A) -> Self
    where
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        A: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::FlbCustom {
            b: std::sync::Arc::new(b),
            big_b: std::sync::Arc::new(big_b),
            strictly_negative: true,
        }
    }

    /// Checks the constant payloads that make the step well defined.
    pub fn check_constants(&self) -> Result<(), SolverError> {
        match self {
            Self::FlbConstant { b1 } if !(b1.is_finite() && *b1 < 0.0) => {
                Err(SolverError::InvalidBound("FlbConstant requires b1 < 0"))
            }
            Self::FlbLinear { b1, b2 } if !(b1.is_finite() && b2.is_finite() && *b2 != 0.0) => {
                Err(SolverError::InvalidBound("FlbLinear requires finite b1 and b2 != 0"))
            }
            Self::FlbCustom {
                strictly_negative: false,
                ..
            } => Err(SolverError::InvalidBound("FlbCustom requires a strictly negative b")),
            Self::Slub { b21, b22 } if !(b21.is_finite() && b22.is_finite() && b21 <= b22) => {
                Err(SolverError::InvalidBound("Slub requires finite b21 <= b22"))
            }
            Self::Tlb { b3 } if !b3.is_finite() => Err(SolverError::InvalidBound("Tlb requires finite b3")),
            _ => Ok(()),
        }
    }

    /// Value of the surrogate `U(θ | θ_t)` built from this recipe.
    pub fn u_value(&self, obj: &OrientedObjective, theta: f64, theta_t: f64) -> Result<f64, SolverError> {
        let gt = obj.g(theta_t);
        let d = theta - theta_t;
        Ok(match self {
            Self::FlbConstant { b1 } => gt + b1 * d,
            Self::FlbLinear { b1, b2 } => gt + (b1 + b2 * theta_t) * d + 0.5 * b2 * d * d,
            Self::FlbCustom { big_b, .. } => gt + big_b(theta) - big_b(theta_t),
            Self::Slub { b21, b22 } => {
                let b2 = if theta > theta_t { *b21 } else { *b22 };
                gt + obj.g1(theta_t)? * d + 0.5 * b2 * d * d
            }
            Self::Tlb { b3 } => {
                let (g1, g2) = (obj.g1(theta_t)?, obj.g2(theta_t)?);
                gt + d * (g1 + d * (0.5 * g2 + d * b3 / 6.0))
            }
        })
    }

    /// Spot-checks the defining derivative inequality on `points`; returns
    /// the first point where it fails by more than `tol`.
    pub fn first_violation(
        &self,
        obj: &OrientedObjective,
        points: &[f64],
        tol: f64,
    ) -> Result<Option<f64>, SolverError> {
        for &x in points {
            let ok = match self {
                Self::FlbConstant { b1 } => *b1 <= obj.g1(x)? + tol,
                Self::FlbLinear { b1, b2 } => b1 + b2 * x <= obj.g1(x)? + tol,
                Self::FlbCustom { b, .. } => b(x) <= obj.g1(x)? + tol,
                Self::Slub { b21, b22 } => {
                    let g2 = obj.g2(x)?;
                    *b21 <= g2 + tol && g2 <= b22 + tol
                }
                Self::Tlb { b3 } => *b3 <= obj.g3(x)? + tol,
            };
            if !ok {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}
