//! Special functions needed by the application catalog, implemented in-crate.

mod beta;
mod gamma;
mod normal;
mod quad;
mod skew_normal;
mod zeta;

use thiserror::Error;

pub use beta::{log_beta, reg_incomplete_beta};
pub use gamma::{digamma, log_gamma, reg_incomplete_gamma_p, reg_incomplete_gamma_q, trigamma};
pub use normal::{erfc, normal_cdf, normal_pdf, std_normal_cdf, std_normal_pdf};
pub use quad::integrate;
pub(crate) use skew_normal::inverse_mills;
pub use skew_normal::{skew_normal_cdf, skew_normal_log_pdf_deriv, skew_normal_pdf};
pub use zeta::{riemann_zeta, riemann_zeta_deriv, riemann_zeta_deriv2, zeta_log_moment};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecialError {
    #[error("argument outside the function's domain: {0}")]
    DomainError(&'static str),
    #[error("accuracy budget exceeded after {0} terms")]
    BudgetExceeded(usize),
}

/// Accuracy target for series-based evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBudget {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for AccuracyBudget {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_terms: 500,
        }
    }
}
