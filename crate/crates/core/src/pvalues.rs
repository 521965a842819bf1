//! Exact two-sided p-values under skewed null distributions.
//!
//! The two-sided p-value adds the tail beyond the observed statistic to the
//! tail beyond the point on the other side of the mode where the density is
//! the same. That point solves `l(x) = l(obs)`, `l` being twice the
//! log-density up to a constant, and is found by US iteration with a
//! closed-form step.
//!
//! The step contracts by roughly `x/m0` per iteration, which approaches 1 as
//! the observation nears the mode, so the solves here run with at least a
//! million iterations and `tol_g ≤ 1e-10` whatever the caller passes.

use serde::{Deserialize, Serialize};

use crate::bound::BoundSpec;
use crate::domain::Domain;
use crate::error::AppError;
use crate::objective::{Objective, OrientedObjective};
use crate::solver::{us_solve_with, SolveOptions, SolveResult, SolveStatus, UpdateRule};
use crate::special::{reg_incomplete_beta, reg_incomplete_gamma_p, reg_incomplete_gamma_q};

/// Position of the observed statistic relative to the density mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    ObsBelowMode,
    ObsAboveMode,
    ObsAtMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualTailResult {
    pub p_value: f64,
    /// The equal-density point on the other side of the mode.
    pub matched_point: f64,
    pub side: Side,
    pub solver: SolveResult,
}

/// Closed-form S-step shapes: `x + G(x)` or `x·exp(G(x)/k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EqualDensityStep {
    Additive,
    Multiplicative(f64),
}

impl EqualDensityStep {
    pub fn apply(self, x: f64, g: f64) -> f64 {
        match self {
            Self::Additive => x + g,
            Self::Multiplicative(k) => x * (g / k).exp(),
        }
    }

    /// The first-derivative bound the step is derived from: `−1`, or `−k/x`
    /// with antiderivative `−k·log x`.
    pub fn bound(self) -> BoundSpec {
        match self {
            Self::Additive => BoundSpec::FlbConstant { b1: -1.0 },
            Self::Multiplicative(k) => BoundSpec::flb_custom(move |x| -k / x, move |x| -k * x.ln()),
        }
    }
}

impl UpdateRule for EqualDensityStep {
    fn next(
        &self,
        _obj: &OrientedObjective,
        theta_t: f64,
        g_t: f64,
        _opts: &SolveOptions,
    ) -> Result<f64, crate::SolverError> {
        Ok(self.apply(theta_t, g_t))
    }
}

/// The equal-density equation for one observed statistic, oriented so that
/// it is positive left of its root.
#[derive(Debug, Clone)]
pub struct EqualDensityProblem {
    pub objective: OrientedObjective,
    pub step: EqualDensityStep,
    pub mode: f64,
    pub side: Side,
    pub x0: f64,
}

const AT_MODE_REL: f64 = 1e-12;
const TOL_G_CAP: f64 = 1e-10;
const MIN_ITER: usize = 1_000_000;

fn side_of(obs: f64, mode: f64) -> Side {
    if (obs - mode).abs() <= AT_MODE_REL * mode {
        Side::ObsAtMode
    } else if obs < mode {
        Side::ObsBelowMode
    } else {
        Side::ObsAboveMode
    }
}

fn start_for(side: Side, obs: f64, mode: f64) -> f64 {
    match side {
        Side::ObsBelowMode => (mode * (1.0 + 1e-6)).max(mode * mode / obs),
        _ => mode * (1.0 - 1e-6),
    }
}

fn problem<L>(
    obs: f64,
    mode: f64,
    l: L,
    below_step: EqualDensityStep,
    above_step: EqualDensityStep,
) -> Result<EqualDensityProblem, AppError>
where
    L: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let side = side_of(obs, mode);
    let c0 = l(obs);
    let (objective, step) = match side {
        Side::ObsAboveMode => {
            let obj = Objective::new(move |x| c0 - l(x), Domain::open(0.0, mode)?);
            (obj, above_step)
        }
        _ => {
            let obj = Objective::new(move |x| l(x) - c0, Domain::open(mode, f64::INFINITY)?);
            (obj, below_step)
        }
    };
    Ok(EqualDensityProblem {
        objective: OrientedObjective::assume_oriented(objective),
        step,
        mode,
        side,
        x0: start_for(side, obs, mode),
    })
}

/// Equal-density equation for `χ²(ν)`: `l(x) = m0·log x − x`, `m0 = ν − 2`.
pub fn chisq_problem(chi_obs: f64, nu: u32) -> Result<EqualDensityProblem, AppError> {
    if nu < 3 {
        return Err(AppError::DomainError("chi-squared equal-density p-value needs nu >= 3"));
    }
    if !(chi_obs > 0.0 && chi_obs.is_finite()) {
        return Err(AppError::DomainError("observed statistic must be positive"));
    }
    let m0 = f64::from(nu) - 2.0;
    problem(
        chi_obs,
        m0,
        move |x: f64| m0 * x.ln() - x,
        EqualDensityStep::Additive,
        EqualDensityStep::Multiplicative(m0),
    )
}

/// Equal-density equation for `F(ν1, ν2)`: `l(x) = m1·log x − ν12·log(1 + νx)`
/// with `m1 = ν1 − 2`, `ν = ν1/ν2`, `ν12 = ν1 + ν2`.
pub fn f_problem(f_obs: f64, nu1: u32, nu2: u32) -> Result<EqualDensityProblem, AppError> {
    if nu1 < 3 || nu2 < 1 {
        return Err(AppError::DomainError(
            "F equal-density p-value needs nu1 >= 3 and nu2 >= 1",
        ));
    }
    if !(f_obs > 0.0 && f_obs.is_finite()) {
        return Err(AppError::DomainError("observed statistic must be positive"));
    }
    let (n1, n2) = (f64::from(nu1), f64::from(nu2));
    let m1 = n1 - 2.0;
    let ratio = n1 / n2;
    let n12 = n1 + n2;
    let mode = m1 * n2 / (n1 * (n2 + 2.0));
    problem(
        f_obs,
        mode,
        move |x: f64| m1 * x.ln() - n12 * (ratio * x).ln_1p(),
        EqualDensityStep::Multiplicative(2.0 + n2),
        EqualDensityStep::Multiplicative(m1),
    )
}

fn solve(problem: &EqualDensityProblem, opts: &SolveOptions) -> Result<SolveResult, AppError> {
    let opts = SolveOptions {
        tol_g: opts.tol_g.min(TOL_G_CAP),
        max_iter: opts.max_iter.max(MIN_ITER),
        ..*opts
    };
    let result = us_solve_with(&problem.objective, &problem.step, problem.x0, &opts)?;
    if result.status != SolveStatus::Converged {
        return Err(AppError::NonConvergence(result.n_iters));
    }
    Ok(result)
}

fn at_mode(obs: f64) -> EqualTailResult {
    let solver = SolveResult {
        root: obs,
        status: SolveStatus::Converged,
        n_iters: 0,
        n_g_evals: 0,
        trace: Vec::new(),
    };
    EqualTailResult {
        p_value: 1.0,
        matched_point: obs,
        side: Side::ObsAtMode,
        solver,
    }
}

/// Two-sided equal-density p-value for an observed `χ²(ν)` statistic.
pub fn chisq_equal_density_pvalue(chi_obs: f64, nu: u32, opts: &SolveOptions) -> Result<EqualTailResult, AppError> {
    let problem = chisq_problem(chi_obs, nu)?;
    if problem.side == Side::ObsAtMode {
        return Ok(at_mode(chi_obs));
    }
    let solver = solve(&problem, opts)?;
    let a = f64::from(nu) / 2.0;
    let (lo, hi) = match problem.side {
        Side::ObsBelowMode => (chi_obs, solver.root),
        _ => (solver.root, chi_obs),
    };
    let p = reg_incomplete_gamma_p(a, lo / 2.0)? + reg_incomplete_gamma_q(a, hi / 2.0)?;
    Ok(EqualTailResult {
        p_value: p.clamp(0.0, 1.0),
        matched_point: solver.root,
        side: problem.side,
        solver,
    })
}

/// `P{F(ν1, ν2) ≤ x}` and `P{F(ν1, ν2) ≥ x}` through the incomplete beta.
pub fn f_tails(x: f64, nu1: f64, nu2: f64) -> Result<(f64, f64), AppError> {
    let lower = reg_incomplete_beta(nu1 * x / (nu1 * x + nu2), nu1 / 2.0, nu2 / 2.0)?;
    let upper = reg_incomplete_beta(nu2 / (nu2 + nu1 * x), nu2 / 2.0, nu1 / 2.0)?;
    Ok((lower, upper))
}

/// Two-sided equal-density p-value for an observed `F(ν1, ν2)` statistic.
pub fn f_equal_density_pvalue(
    f_obs: f64,
    nu1: u32,
    nu2: u32,
    opts: &SolveOptions,
) -> Result<EqualTailResult, AppError> {
    let problem = f_problem(f_obs, nu1, nu2)?;
    if problem.side == Side::ObsAtMode {
        return Ok(at_mode(f_obs));
    }
    let solver = solve(&problem, opts)?;
    let (lo, hi) = match problem.side {
        Side::ObsBelowMode => (f_obs, solver.root),
        _ => (solver.root, f_obs),
    };
    let (n1, n2) = (f64::from(nu1), f64::from(nu2));
    let p = f_tails(lo, n1, n2)?.0 + f_tails(hi, n1, n2)?.1;
    Ok(EqualTailResult {
        p_value: p.clamp(0.0, 1.0),
        matched_point: solver.root,
        side: problem.side,
        solver,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::us_step_flb;

    #[test]
    fn observation_at_mode_gives_one() {
        let r = chisq_equal_density_pvalue(2.0, 4, &SolveOptions::default()).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.side, Side::ObsAtMode);
        let mode = 3.0 * 10.0 / (5.0 * 12.0);
        assert_eq!(
            f_equal_density_pvalue(mode, 5, 10, &SolveOptions::default())
                .unwrap()
                .p_value,
            1.0
        );
    }

    #[test]
    fn matched_point_has_equal_density() {
        let l = |x: f64| 2.0 * x.ln() - x;
        let r = chisq_equal_density_pvalue(1.0, 4, &SolveOptions::default()).unwrap();
        assert_eq!(r.side, Side::ObsBelowMode);
        assert!(r.matched_point > 2.0);
        assert!((l(r.matched_point) - l(1.0)).abs() < 2e-9);
        let r = chisq_equal_density_pvalue(15.0, 10, &SolveOptions::default()).unwrap();
        assert!(r.matched_point > 0.0 && r.matched_point < 8.0);
    }

    #[test]
    fn closed_form_steps_match_generic_bounds() {
        for problem in [
            chisq_problem(1.0, 4).unwrap(),
            chisq_problem(15.0, 10).unwrap(),
            f_problem(0.2, 5, 10).unwrap(),
            f_problem(3.0, 8, 6).unwrap(),
        ] {
            let bound = problem.step.bound();
            let mut x = problem.x0;
            for _ in 0..4 {
                let closed = problem.step.apply(x, problem.objective.g(x));
                let generic = us_step_flb(&problem.objective, &bound, x).unwrap();
                assert!(
                    (closed - generic).abs() < 1e-10 * closed.abs().max(1.0),
                    "{closed} vs {generic}"
                );
                x = closed;
            }
        }
    }

    #[test]
    fn small_degrees_of_freedom_are_rejected() {
        assert!(matches!(
            chisq_equal_density_pvalue(1.0, 2, &SolveOptions::default()),
            Err(AppError::DomainError(_))
        ));
        assert!(matches!(
            f_equal_density_pvalue(1.0, 2, 5, &SolveOptions::default()),
            Err(AppError::DomainError(_))
        ));
    }
}
