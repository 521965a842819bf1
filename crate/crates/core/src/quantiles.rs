//! Quantiles by US iteration on `g(x) = p − F(x)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bound::BoundSpec;
use crate::domain::Domain;
use crate::error::AppError;
use crate::objective::{Objective, OrientedObjective};
use crate::solver::{
    select_directed_root_theta, us_solve, us_solve_with, ClosedFormStep, SolveOptions, SolveResult, UpdateRule,
};
use crate::special::inverse_mills;
use crate::special::{log_beta, reg_incomplete_beta, skew_normal_cdf, skew_normal_pdf, std_normal_cdf, std_normal_pdf};

/// Surrogate used for the normal quantile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum QuantileMethod {
    /// Constant slope `−φ(μ)`: linear convergence.
    #[default]
    Flb,
    /// Piecewise quadratic with `g″` bounded by `±φ′` extremes: quadratic convergence.
    Slub,
    /// Cubic with the minimum of `g‴`: cubic convergence.
    Tlb,
}

fn check_p(p: f64) -> Result<(), AppError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(AppError::DomainError("p must lie in (0, 1)"))
    }
}

fn check_scale(sigma: f64) -> Result<(), AppError> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(AppError::DomainError("sigma must be positive"))
    }
}

/// `g(x) = p − F(x)` on the real line with the constant bound `−f(mode)`.
pub fn mode_quantile_problem<P, C>(
    pdf: P,
    cdf: C,
    mode: f64,
    p: f64,
) -> Result<(OrientedObjective, BoundSpec), AppError>
where
    P: Fn(f64) -> f64 + Send + Sync + 'static,
    C: Fn(f64) -> f64 + Send + Sync + 'static,
{
    check_p(p)?;
    let peak = pdf(mode);
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(AppError::DomainError("density at the mode must be positive and finite"));
    }
    let obj = OrientedObjective::assume_oriented(
        Objective::new(move |x| p - cdf(x), Domain::real_line()).with_d1(move |x| -pdf(x)),
    );
    Ok((obj, BoundSpec::FlbConstant { b1: -peak }))
}

/// Generic mode-based iteration `x ← x − (F(x) − p)/f(mode)`.
pub fn quantile_via_mode<P, C>(
    pdf: P,
    cdf: C,
    mode: f64,
    p: f64,
    x0: f64,
    opts: &SolveOptions,
) -> Result<SolveResult, AppError>
where
    P: Fn(f64) -> f64 + Send + Sync + 'static,
    C: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let (obj, bound) = mode_quantile_problem(pdf, cdf, mode, p)?;
    Ok(us_solve(&obj, &bound, x0, opts)?)
}

/// `g(x) = p − Φ(x | μ, σ²)` with its first three derivatives.
pub fn normal_quantile_objective(p: f64, mu: f64, sigma: f64) -> Result<OrientedObjective, AppError> {
    check_p(p)?;
    check_scale(sigma)?;
    let z = move |x: f64| (x - mu) / sigma;
    let obj = Objective::new(move |x| p - std_normal_cdf(z(x)), Domain::real_line())
        .with_d1(move |x| -std_normal_pdf(z(x)) / sigma)
        .with_d2(move |x| z(x) * std_normal_pdf(z(x)) / (sigma * sigma))
        .with_d3(move |x| {
            let z = z(x);
            (1.0 - z * z) * std_normal_pdf(z) / (sigma * sigma * sigma)
        });
    Ok(OrientedObjective::assume_oriented(obj))
}

/// Bound constants for the normal quantile: `b1 = −1/(√(2π)σ)`,
/// `b21 = −b22 = −1/(√(2π)σ²e^{1/2})`, `b3 = −2/(√(2π)σ³e^{3/2})`.
pub fn normal_quantile_bound(method: QuantileMethod, sigma: f64) -> BoundSpec {
    let root_two_pi = (2.0 * PI).sqrt();
    match method {
        QuantileMethod::Flb => BoundSpec::FlbConstant {
            b1: -1.0 / (root_two_pi * sigma),
        },
        QuantileMethod::Slub => {
            let c = 1.0 / (root_two_pi * sigma * sigma * 0.5f64.exp());
            BoundSpec::Slub { b21: -c, b22: c }
        }
        QuantileMethod::Tlb => BoundSpec::Tlb {
            b3: -2.0 / (root_two_pi * sigma.powi(3) * 1.5f64.exp()),
        },
    }
}

/// `p`-th quantile of `N(μ, σ²)`. The default start is `μ`.
pub fn normal_quantile(
    p: f64,
    mu: f64,
    sigma: f64,
    x0: Option<f64>,
    method: QuantileMethod,
    opts: &SolveOptions,
) -> Result<SolveResult, AppError> {
    let obj = normal_quantile_objective(p, mu, sigma)?;
    Ok(us_solve(
        &obj,
        &normal_quantile_bound(method, sigma),
        x0.unwrap_or(mu),
        opts,
    )?)
}

/// Mean of the MM kernel: `∫_{−∞}^{μ} z·h(z | x_s) dz` where `h` is the
/// `N(μ, σ*²)` density shifted by `x_s − μ` and truncated to `z < μ`.
///
/// With `w = z + x_s − μ`, `w` is `N(μ, σ*²)` truncated to `w < x_s`, whose
/// mean is `μ − σ*·φ(c)/Φ(c)` with `c = (x_s − μ)/σ*`.
pub fn mm_kernel_mean(x_s: f64, mu: f64, sigma_star: f64) -> f64 {
    let c = (x_s - mu) / sigma_star;
    2.0 * mu - x_s - sigma_star * inverse_mills(c)
}

fn skew_normal_log_pdf(x: f64, mu: f64, sigma: f64, alpha: f64) -> f64 {
    let z = (x - mu) / sigma;
    -0.5 * z * z + std_normal_cdf(alpha * z).ln()
}

/// Options used for the mode iteration when none are given explicitly.
pub fn mode_options() -> SolveOptions {
    SolveOptions {
        tol_x: 1e-10,
        max_iter: 500,
        ..SolveOptions::default()
    }
}

/// Mode of the skew-normal density by the minorize–maximize iteration
/// `x ← [μ(1 + 2α²) − α²·K(x)]/(1 + α²)`, `K` being [`mm_kernel_mean`] with
/// `σ* = σ/α`. Stops once a step is at most `opts.tol_x`.
pub fn skew_normal_mode(mu: f64, sigma: f64, alpha: f64, s0: f64, opts: &SolveOptions) -> Result<f64, AppError> {
    check_scale(sigma)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(AppError::DomainError("alpha must be non-negative"));
    }
    if alpha == 0.0 {
        return Ok(mu);
    }
    let a2 = alpha * alpha;
    let sigma_star = sigma / alpha;
    let mut x = s0;
    let mut objective = skew_normal_log_pdf(x, mu, sigma, alpha);
    for _ in 0..opts.max_iter {
        let next = (mu * (1.0 + 2.0 * a2) - a2 * mm_kernel_mean(x, mu, sigma_star)) / (1.0 + a2);
        if !next.is_finite() {
            return Err(AppError::NonConvergence(opts.max_iter));
        }
        if opts.stability_check {
            let value = skew_normal_log_pdf(next, mu, sigma, alpha);
            if value < objective - 1e-12 * objective.abs().max(1.0) {
                return Err(AppError::NonConvergence(opts.max_iter));
            }
            objective = value;
        }
        let step = (next - x).abs();
        x = next;
        if step <= opts.tol_x {
            return Ok(x);
        }
    }
    Err(AppError::NonConvergence(opts.max_iter))
}

/// `p`-th skew-normal quantile: mode first, then the mode-based iteration.
/// The default start is the distribution mean `μ + σδ√(2/π)`, `δ = α/√(1+α²)`.
pub fn skew_normal_quantile(
    p: f64,
    mu: f64,
    sigma: f64,
    alpha: f64,
    x0: Option<f64>,
    opts: &SolveOptions,
) -> Result<SolveResult, AppError> {
    let (obj, bound, start) = skew_normal_quantile_problem(p, mu, sigma, alpha)?;
    Ok(us_solve(&obj, &bound, x0.unwrap_or(start), opts)?)
}

/// Objective, bound and default start (the mean `μ + σδ√(2/π)`,
/// `δ = α/√(1+α²)`) for the skew-normal quantile.
pub fn skew_normal_quantile_problem(
    p: f64,
    mu: f64,
    sigma: f64,
    alpha: f64,
) -> Result<(OrientedObjective, BoundSpec, f64), AppError> {
    check_p(p)?;
    let mode = skew_normal_mode(mu, sigma, alpha, mu, &mode_options())?;
    let delta = alpha / (1.0 + alpha * alpha).sqrt();
    skew_normal_pdf(mode, mu, sigma, alpha)?;
    let (obj, bound) = mode_quantile_problem(
        move |x| skew_normal_pdf(x, mu, sigma, alpha).unwrap_or(f64::NAN),
        move |x| skew_normal_cdf(x, mu, sigma, alpha).unwrap_or(f64::NAN),
        mode,
        p,
    )?;
    Ok((obj, bound, mu + sigma * delta * (2.0 / PI).sqrt()))
}

/// `g(x) = p − F(x | α, β)` on `(0, 1)` for the beta distribution.
pub fn beta_quantile_objective(p: f64, alpha: f64, beta: f64) -> Result<OrientedObjective, AppError> {
    check_p(p)?;
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(AppError::DomainError("beta shapes must be positive"));
    }
    let log_b = log_beta(alpha, beta)?;
    let obj = Objective::new(
        move |x| p - reg_incomplete_beta(x, alpha, beta).unwrap_or(f64::NAN),
        Domain::open(0.0, 1.0)?,
    )
    .with_d1(move |x| -((alpha - 1.0) * x.ln() + (beta - 1.0) * (-x).ln_1p() - log_b).exp());
    Ok(OrientedObjective::assume_oriented(obj))
}

/// The constant `a` of the bound `b(x) = −a/x² − a/(1−x)²` on `−f(x | α, β)`:
/// `a = m^α (1−m)^β / (2B(α, β))` with `m = α/(α+β)`.
pub fn beta_bound_constant(alpha: f64, beta: f64) -> Result<f64, AppError> {
    let m = alpha / (alpha + beta);
    Ok((alpha * m.ln() + beta * (-m).ln_1p() - log_beta(alpha, beta)?).exp() / 2.0)
}

/// The same bound as a generic first-derivative bound, with antiderivative
/// `B(x) = a/x − a/(1−x)`.
pub fn beta_bound(alpha: f64, beta: f64) -> Result<BoundSpec, AppError> {
    let a = beta_bound_constant(alpha, beta)?;
    Ok(BoundSpec::flb_custom(
        move |x| -a / (x * x) - a / ((1.0 - x) * (1.0 - x)),
        move |x| a / x - a / (1.0 - x),
    ))
}

/// `p`-th quantile of `Beta(α, β)` with `α, β ∈ (0, 1)`, where the density
/// has no interior mode. Each step solves `a1·x² + a2·x + a = 0` with
/// `a1 = F(x_t) − p + a/x_t − a/(1−x_t)` and `a2 = −a1 − 2a`. The default
/// start is the mean `α/(α+β)`.
pub fn beta_quantile_small_params(
    p: f64,
    alpha: f64,
    beta: f64,
    x0: Option<f64>,
    opts: &SolveOptions,
) -> Result<SolveResult, AppError> {
    if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) {
        return Err(AppError::DomainError("alpha and beta must lie in (0, 1)"));
    }
    let obj = beta_quantile_objective(p, alpha, beta)?;
    let step = beta_small_params_step(alpha, beta)?;
    let x0 = x0.unwrap_or(alpha / (alpha + beta));
    Ok(us_solve_with(&obj, &step, x0, opts)?)
}

/// The closed-form S-step used by [`beta_quantile_small_params`].
pub fn beta_small_params_step(alpha: f64, beta: f64) -> Result<impl UpdateRule, AppError> {
    let a = beta_bound_constant(alpha, beta)?;
    let domain = Domain::open(0.0, 1.0)?;
    Ok(ClosedFormStep(move |x: f64, g: f64| {
        let a1 = -g + a / x - a / (1.0 - x);
        let a2 = -a1 - 2.0 * a;
        select_directed_root_theta(a1, a2, a, g.signum(), x, &domain)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::us_step_flb;
    use crate::special::integrate;

    fn opts() -> SolveOptions {
        SolveOptions::default().with_tol_g(1e-12)
    }

    #[test]
    fn standard_normal_median_from_one() {
        let r = normal_quantile(0.5, 0.0, 1.0, Some(1.0), QuantileMethod::Flb, &opts()).unwrap();
        assert!(r.converged());
        assert!(r.root.abs() < 1e-10);
    }

    #[test]
    fn normal_quantile_values() {
        let r = normal_quantile(0.9, 2.0, 1.0, None, QuantileMethod::Flb, &opts()).unwrap();
        assert!((r.root - 3.281_551_565_5).abs() < 1e-8);
        for method in [QuantileMethod::Flb, QuantileMethod::Slub, QuantileMethod::Tlb] {
            let r = normal_quantile(0.01, -2.0, 1.0, Some(0.0), method, &opts().with_max_iter(2000)).unwrap();
            assert!(r.converged(), "{method:?}: {:?}", r.status);
            assert!((r.root + 4.326_347_874_0).abs() < 1e-8, "{method:?}");
        }
    }

    #[test]
    fn exponential_median_via_mode() {
        let pdf = |x: f64| if x >= 0.0 { (-x).exp() } else { 0.0 };
        let cdf = |x: f64| if x >= 0.0 { -(-x).exp_m1() } else { 0.0 };
        let r = quantile_via_mode(pdf, cdf, 0.0, 0.5, 2.0, &opts()).unwrap();
        assert!((r.root - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn kernel_mean_matches_quadrature() {
        for (x_s, mu, s) in [(0.3, 0.0, 1.0), (-1.2, 0.5, 0.4), (2.0, 1.0, 0.2), (0.0, 0.0, 3.0)] {
            let c = (x_s - mu) / s;
            let norm = std_normal_cdf(c);
            let h = |z: f64| std_normal_pdf((z + x_s - mu - mu) / s) / (s * norm);
            let lo = mu - (x_s - mu) - 40.0 * s;
            let direct = integrate(|z| z * h(z), lo, mu, 1e-13);
            assert!((direct - mm_kernel_mean(x_s, mu, s)).abs() < 1e-9, "{x_s} {mu} {s}");
        }
    }

    #[test]
    fn skew_normal_mode_zero_alpha() {
        assert_eq!(skew_normal_mode(1.5, 2.0, 0.0, 0.0, &mode_options()).unwrap(), 1.5);
    }

    #[test]
    fn skew_normal_mode_is_stationary() {
        for alpha in [0.5, 1.0, 5.0] {
            let m = skew_normal_mode(0.0, 1.0, alpha, 0.0, &mode_options()).unwrap();
            let d = crate::special::skew_normal_log_pdf_deriv(m, 0.0, 1.0, alpha).unwrap();
            assert!(d.abs() < 1e-6, "alpha {alpha}: {d}");
        }
    }

    #[test]
    fn arcsine_quantiles() {
        let r = beta_quantile_small_params(0.5, 0.5, 0.5, Some(0.3), &opts()).unwrap();
        assert!((r.root - 0.5).abs() < 1e-10);
        let r = beta_quantile_small_params(0.25, 0.5, 0.5, None, &opts()).unwrap();
        assert!((r.root - 0.146_446_609_4).abs() < 1e-9);
    }

    #[test]
    fn beta_quadratic_step_matches_generic_bound() {
        let (alpha, beta, p) = (0.3, 0.7, 0.9);
        let obj = beta_quantile_objective(p, alpha, beta).unwrap();
        let bound = beta_bound(alpha, beta).unwrap();
        let a = beta_bound_constant(alpha, beta).unwrap();
        for x in [0.05, 0.3, 0.6, 0.97] {
            let g = obj.g(x);
            let a1 = -g + a / x - a / (1.0 - x);
            let quad = select_directed_root_theta(a1, -a1 - 2.0 * a, a, g.signum(), x, &obj.domain()).unwrap();
            let generic = us_step_flb(&obj, &bound, x).unwrap();
            assert!((quad - generic).abs() < 1e-10, "x {x}: {quad} vs {generic}");
        }
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(normal_quantile(1.0, 0.0, 1.0, None, QuantileMethod::Flb, &opts()).is_err());
        assert!(beta_quantile_small_params(0.5, 1.5, 0.5, None, &opts()).is_err());
    }
}
