//! Maximum-likelihood estimators whose score equations are solved by US
//! iterations with closed-form quadratic S-steps.
//!
//! Every score `g` here is oriented positive left of its root. The closed
//! form each estimator uses is the root of `g(θ_t) + B(θ) − B(θ_t) = 0`
//! after clearing denominators, `B` being the antiderivative of the
//! first-derivative lower bound returned alongside it in [`ScoreProblem`].

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bound::BoundSpec;
use crate::domain::Domain;
use crate::error::{AppError, SolverError};
use crate::objective::{Objective, OrientedObjective};
use crate::solver::{select_directed_root_theta, us_solve_with, SolveOptions, SolveResult, SolveStatus, UpdateRule};
use crate::special::{digamma, trigamma, zeta_log_moment, AccuracyBudget};

const PI2_6: f64 = PI * PI / 6.0;
const OUTER_MAX: usize = 10_000;
const PROBES: usize = 11;

/// An immutable sample with the summary statistics the estimators use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    mean: f64,
    /// Mean of `log xᵢ`; only defined when every value is positive.
    mean_log: Option<f64>,
    /// `max (log xᵢ)²`; only defined when every value is positive.
    t_max: Option<f64>,
    max: f64,
    variance: f64,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self, AppError> {
        if values.len() < 2 {
            return Err(AppError::DomainError("a sample needs at least two values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(AppError::DomainError("sample values must be finite"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let positive = values.iter().all(|v| *v > 0.0);
        let mean_log = positive.then(|| values.iter().map(|v| v.ln()).sum::<f64>() / n);
        let t_max = positive.then(|| values.iter().map(|v| v.ln().powi(2)).fold(0.0, f64::max));
        Ok(Self {
            values,
            mean,
            mean_log,
            t_max,
            max,
            variance,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn mean_log(&self) -> Option<f64> {
        self.mean_log
    }

    pub fn t_max(&self) -> Option<f64> {
        self.t_max
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    fn require_positive(&self) -> Result<(f64, f64), AppError> {
        match (self.mean_log, self.t_max) {
            (Some(g), Some(t)) => Ok((g, t)),
            _ => Err(AppError::DomainError("all sample values must be positive")),
        }
    }

    fn counts(&self, min: u64) -> Result<Vec<u64>, AppError> {
        self.values
            .iter()
            .map(|v| {
                if v.fract() == 0.0 && *v >= min as f64 && *v < 1e15 {
                    Ok(*v as u64)
                } else if min == 0 {
                    Err(AppError::DomainError("values must be nonnegative integers"))
                } else {
                    Err(AppError::DomainError("values must be integers >= 1"))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub parameters: BTreeMap<String, f64>,
    pub solver: SolveResult,
    /// The score at the reported estimate.
    pub log_likelihood_gradient_at_root: f64,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }
}

type StepFn = Arc<dyn Fn(f64, f64) -> Result<f64, SolverError> + Send + Sync>;

/// A score equation together with its FLB bound, the closed-form S-step
/// derived from that bound, the default start and the root-existence probes.
#[derive(Clone)]
pub struct ScoreProblem {
    pub objective: OrientedObjective,
    pub bound: BoundSpec,
    pub x0: f64,
    pub probes: Vec<f64>,
    step: StepFn,
}

impl std::fmt::Debug for ScoreProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScoreProblem")
            .field("objective", &self.objective)
            .field("x0", &self.x0)
            .finish()
    }
}

impl UpdateRule for ScoreProblem {
    fn next(&self, _obj: &OrientedObjective, theta_t: f64, g_t: f64, _opts: &SolveOptions) -> Result<f64, SolverError> {
        (self.step)(theta_t, g_t)
    }
}

impl ScoreProblem {
    fn new<G, D, S>(score: G, d1: D, domain: Domain, bound: BoundSpec, step: S, x0: f64, probes: Vec<f64>) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        S: Fn(f64, f64) -> Result<f64, SolverError> + Send + Sync + 'static,
    {
        let objective = OrientedObjective::assume_oriented(Objective::new(score, domain).with_d1(d1));
        Self {
            objective,
            bound,
            x0,
            probes,
            step: Arc::new(step),
        }
    }

    pub fn score(&self, theta: f64) -> f64 {
        self.objective.g(theta)
    }

    /// The closed-form S-step from `θ_t`.
    pub fn step(&self, theta_t: f64) -> Result<f64, SolverError> {
        (self.step)(theta_t, self.score(theta_t))
    }

    /// True if the score changes sign across the probe grid.
    pub fn probe_sign_change(&self) -> bool {
        let values: Vec<f64> = self
            .probes
            .iter()
            .map(|x| self.score(*x))
            .filter(|v| v.is_finite())
            .collect();
        values.iter().any(|v| *v == 0.0) || values.windows(2).any(|w| w[0].signum() != w[1].signum())
    }

    /// Runs the US iteration, failing with `NoRoot` when the probe grid shows
    /// no sign change and with `NonConvergence` when the solver does not
    /// report convergence.
    pub fn solve(&self, x0: Option<f64>, opts: &SolveOptions) -> Result<SolveResult, AppError> {
        if !self.probe_sign_change() {
            return Err(AppError::NoRoot("score has constant sign on the probe grid"));
        }
        let result = us_solve_with(&self.objective, self, x0.unwrap_or(self.x0), opts)?;
        if result.status != SolveStatus::Converged {
            return Err(AppError::NonConvergence(result.n_iters));
        }
        Ok(result)
    }

    fn fit(&self, x0: Option<f64>, opts: &SolveOptions, name: &str) -> Result<(FitResult, f64), AppError> {
        let solver = self.solve(x0, opts)?;
        let root = solver.root;
        let mut parameters = BTreeMap::new();
        parameters.insert(name.to_string(), root);
        let fit = FitResult {
            parameters,
            log_likelihood_gradient_at_root: self.score(root),
            solver,
        };
        Ok((fit, root))
    }
}

fn geometric(lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..PROBES)
        .map(|k| (a + (b - a) * k as f64 / (PROBES - 1) as f64).exp())
        .collect()
}

fn interior(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let (a, b) = (lo + 1e-8 * span, hi - 1e-8 * span);
    (0..PROBES)
        .map(|k| a + (b - a) * k as f64 / (PROBES - 1) as f64)
        .collect()
}

fn half_line() -> Domain {
    Domain::open(0.0, f64::INFINITY).expect("valid domain")
}

/// Score `c0 − ψ(α)` for the gamma shape at known rate, `c0 = G + log β`.
/// Bound `−1/α² − π²/6`; step `(π²/6)α² − a3·α − 1 = 0` with
/// `a3 = g(α_t) + (π²/6)α_t − 1/α_t`.
pub fn gamma_alpha_problem(c0: f64) -> Result<ScoreProblem, AppError> {
    if !c0.is_finite() {
        return Err(AppError::DomainError("c0 must be finite"));
    }
    let domain = half_line();
    let bound = BoundSpec::flb_custom(|a| -1.0 / (a * a) - PI2_6, |a| 1.0 / a - PI2_6 * a);
    let step = move |a: f64, g: f64| {
        let a3 = g + PI2_6 * a - 1.0 / a;
        select_directed_root_theta(PI2_6, -a3, -1.0, g.signum(), a, &domain)
    };
    // ψ(α) ≈ log α for large α and ≈ −1/α near zero.
    let x0 = if c0 > 0.0 { c0.exp() + 0.5 } else { -1.0 / c0.min(-1e-3) };
    let probes = geometric(0.1 / (c0.abs() + 10.0), (c0.max(0.0) + 5.0).exp());
    let score = move |a: f64| digamma(a).map_or(f64::NAN, |d| c0 - d);
    let d1 = |a: f64| trigamma(a).map_or(f64::NAN, |t| -t);
    Ok(ScoreProblem::new(score, d1, domain, bound, step, x0, probes))
}

/// MLE of the gamma shape `α` with the rate `β` known.
pub fn gamma_alpha_mle(
    sample: &Sample,
    beta: f64,
    x0: Option<f64>,
    opts: &SolveOptions,
) -> Result<FitResult, AppError> {
    let (g, _) = sample.require_positive()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(AppError::DomainError("beta must be positive"));
    }
    let problem = gamma_alpha_problem(g + beta.ln())?;
    let x0 = x0.or_else(|| moment_alpha(sample));
    let (mut fit, _) = problem.fit(x0, opts, "alpha")?;
    fit.parameters.insert("beta".into(), beta);
    Ok(fit)
}

fn moment_alpha(sample: &Sample) -> Option<f64> {
    let a = 0.5 * sample.mean * sample.mean / sample.variance;
    (a.is_finite() && a > 0.0).then_some(a.clamp(1e-6, 1e8))
}

/// Joint gamma MLE by cyclic profile iteration: `β ← α/x̄`, then the US
/// solve for `α` given `β`, until both score equations hold.
pub fn gamma_fit(sample: &Sample, opts: &SolveOptions) -> Result<FitResult, AppError> {
    let (g_mean, _) = sample.require_positive()?;
    if sample.variance == 0.0 {
        return Err(AppError::NoRoot(
            "zero sample variance: the likelihood increases without bound in alpha",
        ));
    }
    let xbar = sample.mean;
    let inner = SolveOptions {
        tol_g: opts.tol_g * 0.1,
        ..*opts
    };
    let residual = |alpha: f64, beta: f64| digamma(alpha).map(|d| g_mean + beta.ln() - d);

    let mut alpha = moment_alpha(sample).unwrap_or(1.0);
    let mut beta = alpha / xbar;
    let mut total_iters = 0;
    let mut total_evals = 0;
    let mut trace = Vec::new();
    for _ in 0..OUTER_MAX {
        let problem = gamma_alpha_problem(g_mean + beta.ln())?;
        let solved = problem.solve(Some(alpha), &inner)?;
        total_iters += solved.n_iters;
        total_evals += solved.n_g_evals;
        if opts.record_trace {
            trace.extend(solved.trace.iter().copied());
        }
        let (prev_a, prev_b) = (alpha, beta);
        alpha = solved.root;
        beta = alpha / xbar;
        let change = (alpha - prev_a).abs().max((beta - prev_b).abs());
        let r = residual(alpha, beta)?;
        if r.abs() <= opts.tol_g || change <= opts.tol_x {
            if r.abs() > opts.tol_g {
                return Err(AppError::NonConvergence(total_iters));
            }
            let solver = SolveResult {
                root: alpha,
                status: SolveStatus::Converged,
                n_iters: total_iters,
                n_g_evals: total_evals,
                trace,
            };
            let parameters = BTreeMap::from([("alpha".to_string(), alpha), ("beta".to_string(), beta)]);
            return Ok(FitResult {
                parameters,
                solver,
                log_likelihood_gradient_at_root: r,
            });
        }
    }
    Err(AppError::NonConvergence(total_iters))
}

// log Σ exp(θ·lᵢ), then the mean and variance of lᵢ under weights ∝ exp(θ·lᵢ).
fn weighted_logs(logs: &[f64], theta: f64) -> (f64, f64, f64) {
    let m = logs.iter().map(|l| theta * l).fold(f64::NEG_INFINITY, f64::max);
    let (mut s0, mut s1) = (0.0, 0.0);
    for l in logs {
        let w = (theta * l - m).exp();
        s0 += w;
        s1 += w * l;
    }
    let mean = s1 / s0;
    let var = logs
        .iter()
        .map(|l| (theta * l - m).exp() * (l - mean) * (l - mean))
        .sum::<f64>()
        / s0;
    (m + s0.ln(), mean, var)
}

/// Weibull profile score `G + 1/θ − Σxᵢ^θ log xᵢ / Σxᵢ^θ`, bound
/// `−1/θ² − T_max`, step `T_max·θ² − a4·θ − 1 = 0` with
/// `a4 = g(θ_t) + T_max·θ_t − 1/θ_t`.
pub fn weibull_problem(sample: &Sample) -> Result<ScoreProblem, AppError> {
    let (g_mean, t_max) = sample.require_positive()?;
    if sample.variance == 0.0 || t_max == 0.0 {
        return Err(AppError::DegenerateSample(
            "all values are equal, so the score is 1/theta > 0",
        ));
    }
    let logs: Vec<f64> = sample.values.iter().map(|v| v.ln()).collect();
    let logs2 = logs.clone();
    let score = move |t: f64| g_mean + 1.0 / t - weighted_logs(&logs, t).1;
    let d1 = move |t: f64| -1.0 / (t * t) - weighted_logs(&logs2, t).2;
    let domain = half_line();
    let bound = BoundSpec::flb_custom(move |t| -1.0 / (t * t) - t_max, move |t| 1.0 / t - t_max * t);
    let step = move |t: f64, g: f64| {
        let a4 = g + t_max * t - 1.0 / t;
        select_directed_root_theta(t_max, -a4, -1.0, g.signum(), t, &domain)
    };
    Ok(ScoreProblem::new(
        score,
        d1,
        domain,
        bound,
        step,
        1.0,
        geometric(1e-4, 1e6),
    ))
}

/// Weibull MLE: shape `θ` by US iteration, then `λ = [(1/n)Σxᵢ^θ]^{1/θ}`.
pub fn weibull_fit(sample: &Sample, x0: Option<f64>, opts: &SolveOptions) -> Result<FitResult, AppError> {
    let problem = weibull_problem(sample)?;
    let (mut fit, theta) = problem.fit(x0, opts, "theta")?;
    let logs: Vec<f64> = sample.values.iter().map(|v| v.ln()).collect();
    let lse = weighted_logs(&logs, theta).0;
    let lambda = ((lse - (sample.n() as f64).ln()) / theta).exp();
    fit.parameters.insert("lambda".into(), lambda);
    Ok(fit)
}

/// Constants of the zeta score bound `b(θ) = a5 − a6/(θ−1)²`.
pub const ZETA_A5: f64 = -LN_2 * (LN_2 + 2.0);
pub const ZETA_A6: f64 = 2.0 * LN_2 + 2.0;

/// Zeta score `−G − Z′(θ)/Z(θ)` on `(1, ∞)`, step
/// `a5·θ² + a7·θ + a8 = 0` with `a7 = g_t − a5(θ_t+1) − a6/(θ_t−1)` and
/// `a8 = −g_t + a5·θ_t + a6·θ_t/(θ_t−1)`.
pub fn zeta_problem(sample: &Sample) -> Result<ScoreProblem, AppError> {
    let counts = sample.counts(1)?;
    if counts.iter().all(|c| *c == 1) {
        return Err(AppError::DegenerateSample(
            "all values are 1, so the score is positive everywhere",
        ));
    }
    let g_mean = sample.mean_log.expect("counts are positive");
    let score = move |t: f64| {
        let budget = AccuracyBudget::default();
        match (zeta_log_moment(t, 0, budget), zeta_log_moment(t, 1, budget)) {
            (Ok(z), Ok(z1)) => -g_mean + z1 / z,
            _ => f64::NAN,
        }
    };
    let d1 = |t: f64| {
        let budget = AccuracyBudget::default();
        match (
            zeta_log_moment(t, 0, budget),
            zeta_log_moment(t, 1, budget),
            zeta_log_moment(t, 2, budget),
        ) {
            (Ok(z), Ok(z1), Ok(z2)) => (z1 / z).powi(2) - z2 / z,
            _ => f64::NAN,
        }
    };
    let domain = Domain::open(1.0, f64::INFINITY)?;
    let (a5, a6) = (ZETA_A5, ZETA_A6);
    let bound = BoundSpec::flb_custom(
        move |t| a5 - a6 / ((t - 1.0) * (t - 1.0)),
        move |t| a5 * t + a6 / (t - 1.0),
    );
    let step = move |t: f64, g: f64| {
        let a7 = g - a5 * (t + 1.0) - a6 / (t - 1.0);
        let a8 = -g + a5 * t + a6 * t / (t - 1.0);
        select_directed_root_theta(a5, a7, a8, g.signum(), t, &domain)
    };
    let probes = geometric(1e-3, 1e2).into_iter().map(|d| 1.0 + d).collect();
    Ok(ScoreProblem::new(score, d1, domain, bound, step, 1.5, probes))
}

pub fn zeta_theta_mle(sample: &Sample, x0: Option<f64>, opts: &SolveOptions) -> Result<FitResult, AppError> {
    Ok(zeta_problem(sample)?.fit(x0, opts, "theta")?.0)
}

/// Yule–Simon score `n/θ − Σᵢ Σ_{m<xᵢ} 1/(m+θ+1)`, bound
/// `−n/θ² + n/(θ+1)²`, step `a9·θ² + a9·θ + n = 0` with
/// `a9 = g(θ_t) − n/θ_t + n/(θ_t+1)`.
pub fn yule_simon_problem(sample: &Sample) -> Result<ScoreProblem, AppError> {
    let counts = sample.counts(1)?;
    if counts.iter().all(|c| *c == 1) {
        return Err(AppError::DegenerateSample(
            "all values are 1, so the score is positive everywhere",
        ));
    }
    let n = sample.n() as f64;
    let counts2 = counts.clone();
    let score = move |t: f64| {
        let inner: f64 = counts
            .iter()
            .map(|&x| (0..x).map(|m| 1.0 / (m as f64 + t + 1.0)).sum::<f64>())
            .sum();
        n / t - inner
    };
    let d1 = move |t: f64| {
        let inner: f64 = counts2
            .iter()
            .map(|&x| (0..x).map(|m| (m as f64 + t + 1.0).powi(-2)).sum::<f64>())
            .sum();
        inner - n / (t * t)
    };
    let domain = half_line();
    let bound = BoundSpec::flb_custom(
        move |t| -n / (t * t) + n / ((t + 1.0) * (t + 1.0)),
        move |t| n / t - n / (t + 1.0),
    );
    let step = move |t: f64, g: f64| {
        let a9 = g - n / t + n / (t + 1.0);
        select_directed_root_theta(a9, a9, n, g.signum(), t, &domain)
    };
    Ok(ScoreProblem::new(
        score,
        d1,
        domain,
        bound,
        step,
        1.0,
        geometric(1e-6, 1e4),
    ))
}

pub fn yule_simon_mle(sample: &Sample, x0: Option<f64>, opts: &SolveOptions) -> Result<FitResult, AppError> {
    Ok(yule_simon_problem(sample)?.fit(x0, opts, "theta")?.0)
}

/// Gamma–Poisson profile score
/// `Σᵢ Σ_{m<xᵢ} 1/(m+α) + n·log α − n·log(α+x̄)`, bound `a10 + a11/α²`
/// with `a10 = −Σᵢ Σ_{1≤m<xᵢ} m⁻²` and `a11 = −#{xᵢ ≥ 1}`, step
/// `a10·α² + a12·α − a11 = 0` with `a12 = g(α_t) − a10·α_t + a11/α_t`.
pub fn gamma_poisson_problem(sample: &Sample) -> Result<ScoreProblem, AppError> {
    let counts = sample.counts(0)?;
    if counts.iter().all(|c| *c == 0) {
        return Err(AppError::DegenerateSample("all values are 0"));
    }
    let n = sample.n() as f64;
    let xbar = sample.mean;
    let a10 = -counts
        .iter()
        .map(|&x| (1..x).map(|m| 1.0 / (m as f64 * m as f64)).sum::<f64>())
        .sum::<f64>();
    let a11 = -(counts.iter().filter(|x| **x >= 1).count() as f64);
    let counts2 = counts.clone();
    let score = move |a: f64| {
        let inner: f64 = counts
            .iter()
            .map(|&x| (0..x).map(|m| 1.0 / (m as f64 + a)).sum::<f64>())
            .sum();
        inner - n * (xbar / a).ln_1p()
    };
    let d1 = move |a: f64| {
        let inner: f64 = counts2
            .iter()
            .map(|&x| (0..x).map(|m| (m as f64 + a).powi(-2)).sum::<f64>())
            .sum();
        n * xbar / (a * (a + xbar)) - inner
    };
    let domain = half_line();
    let bound = BoundSpec::flb_custom(move |a| a10 + a11 / (a * a), move |a| a10 * a - a11 / a);
    let step = move |a: f64, g: f64| {
        let a12 = g - a10 * a + a11 / a;
        select_directed_root_theta(a10, a12, -a11, g.signum(), a, &domain)
    };
    let excess = sample.variance - xbar;
    let x0 = if excess > 0.0 {
        (xbar * xbar / excess).clamp(1e-3, 1e5)
    } else {
        1.0
    };
    Ok(ScoreProblem::new(
        score,
        d1,
        domain,
        bound,
        step,
        x0,
        geometric(1e-4, 1e6),
    ))
}

/// Gamma–Poisson MLE: `α` by US iteration, then `β = α/x̄`.
pub fn gamma_poisson_fit(sample: &Sample, x0: Option<f64>, opts: &SolveOptions) -> Result<FitResult, AppError> {
    let (mut fit, alpha) = gamma_poisson_problem(sample)?.fit(x0, opts, "alpha")?;
    fit.parameters.insert("beta".into(), alpha / sample.mean);
    Ok(fit)
}

/// Admissible `θ` interval for the generalized Poisson fit,
/// `(max(−1, −a14(1−1e−9)), 0)` with `a14 = x̄/(x_(n) − x̄)`.
pub fn genpoisson_interval(sample: &Sample) -> Result<(f64, f64), AppError> {
    let spread = sample.max - sample.mean;
    if !(spread > 0.0) {
        return Err(AppError::DegenerateSample("the maximum equals the mean"));
    }
    Ok(((-1.0f64).max(-sample.mean / spread * (1.0 - 1e-9)), 0.0))
}

/// Generalized Poisson profile score (θ < 0)
/// `−n/(1−θ) + Σ (xᵢ−1)(xᵢ−x̄)/(x̄ + (xᵢ−x̄)θ)`, bound
/// `−n/(1−θ)² − a13/(a14+θ)²`, step
/// `a15·θ² − a16·θ + (n − a15)·a14 − a13 = 0`.
pub fn genpoisson_problem(sample: &Sample) -> Result<ScoreProblem, AppError> {
    let counts = sample.counts(0)?;
    let (lo, hi) = genpoisson_interval(sample)?;
    let n = sample.n() as f64;
    let (xbar, spread) = (sample.mean, sample.max - sample.mean);
    let a13 = counts
        .iter()
        .map(|&x| x as f64 * ((x as f64 - xbar) / spread).powi(2))
        .sum::<f64>();
    let a14 = xbar / spread;
    let xs: Vec<f64> = counts.iter().map(|&x| x as f64).collect();
    let xs2 = xs.clone();
    let score = move |t: f64| {
        -n / (1.0 - t)
            + xs.iter()
                .map(|x| (x - 1.0) * (x - xbar) / (xbar + (x - xbar) * t))
                .sum::<f64>()
    };
    let d1 = move |t: f64| {
        -n / ((1.0 - t) * (1.0 - t))
            - xs2
                .iter()
                .map(|x| (x - 1.0) * ((x - xbar) / (xbar + (x - xbar) * t)).powi(2))
                .sum::<f64>()
    };
    let domain = Domain::open(lo, hi)?;
    let bound = BoundSpec::flb_custom(
        move |t| -n / ((1.0 - t) * (1.0 - t)) - a13 / ((a14 + t) * (a14 + t)),
        move |t| -n / (1.0 - t) + a13 / (a14 + t),
    );
    let step = move |t: f64, g: f64| {
        let a15 = g + n / (1.0 - t) - a13 / (a14 + t);
        let a16 = a15 * (1.0 - a14) - n - a13;
        select_directed_root_theta(a15, -a16, (n - a15) * a14 - a13, g.signum(), t, &domain)
    };
    Ok(ScoreProblem::new(
        score,
        d1,
        domain,
        bound,
        step,
        0.5 * (lo + hi),
        interior(lo, hi),
    ))
}

/// Generalized Poisson MLE for `θ < 0`, then `λ = (1 − θ)·x̄`.
pub fn genpoisson_theta_mle(sample: &Sample, x0: Option<f64>, opts: &SolveOptions) -> Result<FitResult, AppError> {
    let (mut fit, theta) = genpoisson_problem(sample)?.fit(x0, opts, "theta")?;
    fit.parameters.insert("lambda".into(), (1.0 - theta) * sample.mean);
    Ok(fit)
}
