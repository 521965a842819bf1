//! Reproduction harness for the numerical experiments: the cosine example trace,
//! the polynomial comparison and the normal-quantile comparison, plus the
//! catalog of problems used by the stability suite.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::BoundSpec;
use crate::domain::Domain;
use crate::error::{AppError, SolverError};
use crate::mle::{self, Sample};
use crate::objective::{Objective, OrientedObjective};
use crate::pvalues::{chisq_problem, f_problem};
use crate::quantiles::{
    beta_quantile_objective, beta_small_params_step, normal_quantile_bound, normal_quantile_objective,
    skew_normal_quantile_problem, QuantileMethod,
};
use crate::solver::{
    bisection_solve, fill_reference, newton_solve, us_solve, us_solve_with, ClosedFormStep, IterationRecord,
    SolveOptions, SolveResult, SolveStatus, UpdateRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    UsFlb,
    UsSlub,
    UsTlb,
    Newton,
    Bisection,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Self::UsFlb, Self::UsSlub, Self::UsTlb, Self::Newton, Self::Bisection];

    pub fn name(self) -> &'static str {
        match self {
            Self::UsFlb => "us_flb",
            Self::UsSlub => "us_slub",
            Self::UsTlb => "us_tlb",
            Self::Newton => "newton",
            Self::Bisection => "bisection",
        }
    }

    pub fn is_us(self) -> bool {
        matches!(self, Self::UsFlb | Self::UsSlub | Self::UsTlb)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| AppError::UnknownAlgorithm(s.to_string()))
    }
}

/// A root-finding problem with the US steps available for it.
#[derive(Clone)]
pub struct ProblemInstance {
    pub id: String,
    pub objective: OrientedObjective,
    /// Range the experiments draw initial values from.
    pub init: (f64, f64),
    /// An interval known to bracket the root, used by the bisection oracle.
    pub oracle_bracket: (f64, f64),
    /// Options the catalog recommends for the US runs.
    pub opts: SolveOptions,
    rules: Vec<(Algorithm, Arc<dyn UpdateRule>)>,
}

impl fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("id", &self.id)
            .field("init", &self.init)
            .field("algorithms", &self.algorithms())
            .finish()
    }
}

impl ProblemInstance {
    fn new(id: impl Into<String>, objective: OrientedObjective, init: (f64, f64), oracle_bracket: (f64, f64)) -> Self {
        Self {
            id: id.into(),
            objective,
            init,
            oracle_bracket,
            opts: SolveOptions::default().with_tol_g(1e-12),
            rules: Vec::new(),
        }
    }

    fn with_rule<R: UpdateRule + 'static>(mut self, algorithm: Algorithm, rule: R) -> Self {
        self.rules.push((algorithm, Arc::new(rule)));
        self
    }

    fn with_opts(mut self, opts: SolveOptions) -> Self {
        self.opts = opts;
        self
    }

    /// Algorithms that can run on this problem: its US steps, plus Newton
    /// when `g′` is available, plus bisection.
    pub fn algorithms(&self) -> Vec<Algorithm> {
        let mut algs: Vec<Algorithm> = self.rules.iter().map(|(a, _)| *a).collect();
        if self.objective.g1(self.init.0).is_ok() {
            algs.push(Algorithm::Newton);
        }
        algs.push(Algorithm::Bisection);
        algs
    }

    /// US algorithms of this problem.
    pub fn us_algorithms(&self) -> Vec<Algorithm> {
        self.rules.iter().map(|(a, _)| *a).collect()
    }

    pub fn rule(&self, algorithm: Algorithm) -> Option<&dyn UpdateRule> {
        self.rules
            .iter()
            .find(|(a, _)| *a == algorithm)
            .map(|(_, r)| r.as_ref())
    }

    /// Runs one algorithm from `x0`. Bisection brackets from `x0` toward the
    /// root: `[x0, hi]` when `g(x0) > 0`, `[lo, x0]` otherwise, with `lo`/`hi`
    /// taken from the init range and pushed outward until `g` changes sign.
    pub fn run(&self, algorithm: Algorithm, x0: f64, opts: &SolveOptions) -> Result<SolveResult, AppError> {
        match algorithm {
            Algorithm::Newton => Ok(newton_solve(&self.objective, x0, opts)?),
            Algorithm::Bisection => self.bisect_from(x0, opts),
            us => {
                let rule = self
                    .rule(us)
                    .ok_or_else(|| AppError::UnknownAlgorithm(format!("{us} on {}", self.id)))?;
                Ok(us_solve_with(&self.objective, rule, x0, opts)?)
            }
        }
    }

    fn bisect_from(&self, x0: f64, opts: &SolveOptions) -> Result<SolveResult, AppError> {
        let g = |x: f64| self.objective.g(x);
        let g0 = g(x0);
        if g0 == 0.0 {
            return Ok(SolveResult {
                root: x0,
                status: SolveStatus::Converged,
                n_iters: 0,
                n_g_evals: 1,
                trace: Vec::new(),
            });
        }
        let domain = self.objective.domain();
        let dir = if g0 > 0.0 { 1.0 } else { -1.0 };
        let mut end = if dir > 0.0 { self.init.1 } else { self.init.0 };
        if (end - x0) * dir <= 0.0 {
            end = x0 + dir * (self.init.1 - self.init.0);
        }
        for _ in 0..200 {
            if g(end) * g0 <= 0.0 {
                break;
            }
            let mut next = x0 + 2.0 * (end - x0);
            if !domain.contains(next) {
                let edge = if dir > 0.0 {
                    domain.probe_hi()
                } else {
                    domain.probe_lo()
                };
                next = edge.map_or(next, |e| 0.5 * (end + e));
            }
            end = next;
        }
        let bis = SolveOptions {
            tol_g: f64::MIN_POSITIVE,
            tol_x: opts.tol_x,
            max_iter: opts.max_iter.max(2000),
            ..*opts
        };
        Ok(bisection_solve(g, x0, end, &bis)?)
    }

    /// Root by bisection on the oracle bracket to `1e-14`.
    pub fn oracle_root(&self) -> Result<f64, AppError> {
        let opts = SolveOptions {
            tol_g: f64::MIN_POSITIVE,
            tol_x: 1e-14,
            max_iter: 400,
            ..SolveOptions::default()
        };
        let (lo, hi) = self.oracle_bracket;
        Ok(bisection_solve(|x| self.objective.g(x), lo, hi, &opts)?.root)
    }
}

/// Cosine example: `g(x) = cos(πx/2) − x` with its first three derivatives.
pub fn example1_objective() -> OrientedObjective {
    let h = 0.5 * PI;
    OrientedObjective::assume_oriented(
        Objective::new(move |x| (h * x).cos() - x, Domain::real_line())
            .with_d1(move |x| -h * (h * x).sin() - 1.0)
            .with_d2(move |x| -h * h * (h * x).cos())
            .with_d3(move |x| h * h * h * (h * x).sin()),
    )
}

/// Stopping tolerance on `|g|` used for the cosine example trace.
pub const TABLE1_TOL_G: f64 = 1e-6;

/// The FLB constant of the cosine example, `−(π/2 + 1)`.
pub const EXAMPLE1_B1: f64 = -(0.5 * PI + 1.0);

/// The cosine example with FLB `b1 = −(π/2+1)`, SLUB `±π²/4` and TLB `−π³/8`.
pub fn example1_problem() -> ProblemInstance {
    let h = 0.5 * PI;
    ProblemInstance::new("example1", example1_objective(), (-1.0, 2.0), (-1.0, 2.0))
        .with_rule(Algorithm::UsFlb, BoundSpec::FlbConstant { b1: EXAMPLE1_B1 })
        .with_rule(
            Algorithm::UsSlub,
            BoundSpec::Slub {
                b21: -h * h,
                b22: h * h,
            },
        )
        .with_rule(Algorithm::UsTlb, BoundSpec::Tlb { b3: -h * h * h })
}

/// Coefficients of `g(θ) = a3·θ^m + a2·θ² + a1·θ + a0` on `[0, a_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    pub m: f64,
    pub a_max: f64,
}

impl Polynomial {
    pub fn value(&self, x: f64) -> f64 {
        self.a3 * x.powf(self.m) + self.a2 * x * x + self.a1 * x + self.a0
    }

    /// Coefficients `(A2, A1, A0)` of the quadratic surrogate at `x_t`: the
    /// second-derivative pair `(a3·m(m−1)a_max^{m−2}, 0)` of the `θ^m` term
    /// when `a3 < 0`, its third-derivative bound `0` when `a3 > 0`.
    pub fn surrogate(&self, x: f64, g: f64) -> (f64, f64, f64) {
        let Self {
            a3,
            a2,
            a1,
            a0,
            m,
            a_max,
        } = *self;
        if a3 < 0.0 {
            let b2 = if g > 0.0 {
                a3 * m * (m - 1.0) * a_max.powf(m - 2.0)
            } else {
                0.0
            };
            (
                0.5 * b2 + a2,
                a3 * m * x.powf(m - 1.0) - b2 * x + a1,
                a3 * (1.0 - m) * x.powf(m) + 0.5 * b2 * x * x + a0,
            )
        } else {
            (
                0.5 * a3 * m * (m - 1.0) * x.powf(m - 2.0) + a2,
                a3 * m * (2.0 - m) * x.powf(m - 1.0) + a1,
                a3 * (m - 1.0) * (0.5 * m - 1.0) * x.powf(m) + a0,
            )
        }
    }

    /// One S-step: the root `−(A1 + √Δ)/(2·A2)` of the surrogate quadratic.
    pub fn step(&self, x: f64, g: f64) -> Result<f64, SolverError> {
        let (a2, a1, a0) = self.surrogate(x, g);
        if a2 == 0.0 {
            return if a1 == 0.0 {
                Err(SolverError::NoAdmissibleStep)
            } else {
                Ok(-a0 / a1)
            };
        }
        let disc = a1 * a1 - 4.0 * a2 * a0;
        if disc < 0.0 {
            return Err(SolverError::NoAdmissibleStep);
        }
        let s = disc.sqrt();
        // Same root, written to avoid cancellation between A1 and √Δ.
        Ok(if a1 >= 0.0 {
            -(a1 + s) / (2.0 * a2)
        } else {
            2.0 * a0 / (s - a1)
        })
    }

    /// The bound the step is equivalent to on `[0, a_max]`: SLUB with
    /// `(a3·m(m−1)a_max^{m−2} + 2a2, 2a2)` or TLB with `b3 = 0`.
    pub fn bound(&self) -> BoundSpec {
        let Self { a3, a2, m, a_max, .. } = *self;
        if a3 < 0.0 {
            BoundSpec::Slub {
                b21: a3 * m * (m - 1.0) * a_max.powf(m - 2.0) + 2.0 * a2,
                b22: 2.0 * a2,
            }
        } else {
            BoundSpec::Tlb { b3: 0.0 }
        }
    }

    pub fn us_algorithm(&self) -> Algorithm {
        if self.a3 < 0.0 {
            Algorithm::UsSlub
        } else {
            Algorithm::UsTlb
        }
    }
}

impl UpdateRule for Polynomial {
    fn next(&self, _obj: &OrientedObjective, theta_t: f64, g_t: f64, _opts: &SolveOptions) -> Result<f64, SolverError> {
        self.step(theta_t, g_t)
    }
}

fn sign_changes<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, n: usize) -> usize {
    let vals: Vec<f64> = (0..=n)
        .map(|k| g(lo + (hi - lo) * k as f64 / n as f64))
        .filter(|v| *v != 0.0)
        .collect();
    vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

/// The polynomial problem `a3·θ^m + a2·θ² + a1·θ + a0 = 0` on `[0, a_max]`
/// with its closed-form US step (U₂ when `a3 < 0`, U₃ when `a3 > 0`).
pub fn polynomial_problem(a3: f64, a2: f64, a1: f64, a0: f64, m: f64, a_max: f64) -> Result<ProblemInstance, AppError> {
    if !(a0 > 0.0) {
        return Err(AppError::DomainError("a0 must be positive"));
    }
    if !(m >= 3.0 && a_max > 0.0 && a_max.is_finite()) || a3 == 0.0 {
        return Err(AppError::DomainError("need m >= 3, a_max > 0 and a3 != 0"));
    }
    let poly = Polynomial {
        a3,
        a2,
        a1,
        a0,
        m,
        a_max,
    };
    if sign_changes(|x| poly.value(x), 0.0, a_max, 1024) != 1 {
        return Err(AppError::NoRoot("g must change sign exactly once on (0, a_max)"));
    }
    let obj = Objective::new(move |x| poly.value(x), Domain::closed(0.0, a_max)?)
        .with_d1(move |x| a3 * m * x.powf(m - 1.0) + 2.0 * a2 * x + a1)
        .with_d2(move |x| a3 * m * (m - 1.0) * x.powf(m - 2.0) + 2.0 * a2)
        .with_d3(move |x| a3 * m * (m - 1.0) * (m - 2.0) * x.powf(m - 3.0));
    let id = format!("poly({a3},{a2},{a1},{a0};m={m},a={a_max})");
    Ok(
        ProblemInstance::new(id, OrientedObjective::assume_oriented(obj), (0.0, a_max), (0.0, a_max))
            .with_rule(poly.us_algorithm(), poly),
    )
}

/// Normal quantile `p − Φ(x | μ, σ²)` with all three US constructions.
pub fn normal_quantile_problem(p: f64, mu: f64, sigma: f64) -> Result<ProblemInstance, AppError> {
    let obj = normal_quantile_objective(p, mu, sigma)?;
    let id = format!("normal-quantile(p={p},mu={mu},sigma={sigma})");
    let span = 40.0 * sigma;
    Ok(
        ProblemInstance::new(id, obj, (mu - 4.0 * sigma, mu + 4.0 * sigma), (mu - span, mu + span))
            .with_rule(Algorithm::UsFlb, normal_quantile_bound(QuantileMethod::Flb, sigma))
            .with_rule(Algorithm::UsSlub, normal_quantile_bound(QuantileMethod::Slub, sigma))
            .with_rule(Algorithm::UsTlb, normal_quantile_bound(QuantileMethod::Tlb, sigma))
            .with_opts(SolveOptions::default().with_tol_g(1e-12).with_max_iter(5000)),
    )
}

/// Named problems: `example1`, `table2a`, `table2b`, and
/// `table3-p{0.01|0.9}-mu{-2|2}`.
pub fn problem_by_id(id: &str) -> Result<ProblemInstance, AppError> {
    match id {
        "example1" => Ok(example1_problem()),
        "table2a" => polynomial_problem(-1.0, 1.0, -1.0, 1.0, 3.0, 2.0),
        "table2b" => polynomial_problem(1.0, -3.0, -1.0, 1.0, 3.0, 2.0),
        _ => {
            let rest = id
                .strip_prefix("table3-p")
                .ok_or_else(|| AppError::UnknownProblem(id.to_string()))?;
            let (p, mu) = rest
                .split_once("-mu")
                .ok_or_else(|| AppError::UnknownProblem(id.to_string()))?;
            let p: f64 = p.parse().map_err(|_| AppError::UnknownProblem(id.to_string()))?;
            let mu: f64 = mu.parse().map_err(|_| AppError::UnknownProblem(id.to_string()))?;
            normal_quantile_problem(p, mu, 1.0)
        }
    }
}

/// Problems the stability suite sweeps: the cosine example, both polynomial branches,
/// normal / skew-normal / beta quantiles, both p-value cases for χ² and F,
/// and the six MLE score equations.
pub fn stability_catalog() -> Result<Vec<ProblemInstance>, AppError> {
    let mut out = vec![example1_problem(), problem_by_id("table2a")?, problem_by_id("table2b")?];
    out.push(normal_quantile_problem(0.01, -2.0, 1.0)?);
    out.push(normal_quantile_problem(0.9, 2.0, 1.0)?);

    let (obj, bound, _) = skew_normal_quantile_problem(0.95, 1.0, 2.0, 3.0)?;
    out.push(
        ProblemInstance::new("skew-normal-quantile(0.95,1,2,3)", obj, (-3.0, 9.0), (-20.0, 20.0))
            .with_rule(Algorithm::UsFlb, bound)
            .with_opts(SolveOptions::default().with_tol_g(1e-12).with_max_iter(5000)),
    );
    out.push(
        ProblemInstance::new(
            "beta-quantile(0.9,0.3,0.7)",
            beta_quantile_objective(0.9, 0.3, 0.7)?,
            (0.2, 0.95),
            (1e-9, 1.0 - 1e-9),
        )
        .with_rule(Algorithm::UsFlb, beta_small_params_step(0.3, 0.7)?)
        .with_opts(SolveOptions::default().with_tol_g(1e-12).with_max_iter(5000)),
    );

    let pvalue_opts = SolveOptions::default().with_tol_g(1e-12).with_max_iter(1_000_000);
    for (name, problem, init, bracket) in [
        (
            "chisq-below-mode(1,4)",
            chisq_problem(1.0, 4)?,
            (2.01, 8.0),
            (2.0 + 1e-9, 50.0),
        ),
        (
            "chisq-above-mode(15,10)",
            chisq_problem(15.0, 10)?,
            (0.5, 7.9),
            (1e-9, 8.0 - 1e-9),
        ),
        (
            "f-below-mode(0.2,5,10)",
            f_problem(0.2, 5, 10)?,
            (0.51, 3.0),
            (0.5 + 1e-9, 50.0),
        ),
        (
            "f-above-mode(3,8,6)",
            f_problem(3.0, 8, 6)?,
            (0.02, 0.55),
            (1e-9, 0.5625 - 1e-9),
        ),
    ] {
        let step = problem.step;
        out.push(
            ProblemInstance::new(name, problem.objective, init, bracket)
                .with_rule(
                    Algorithm::UsFlb,
                    ClosedFormStep(move |x: f64, g: f64| Ok(step.apply(x, g))),
                )
                .with_opts(pvalue_opts),
        );
    }

    let mle_opts = SolveOptions::default().with_tol_g(1e-12).with_max_iter(1_000_000);
    let sample = |v: &[f64]| Sample::new(v.to_vec());
    let gp = sample(&[3.0, 4.0, 4.0, 5.0, 5.0, 5.0, 6.0, 6.0, 7.0])?;
    let (gp_lo, gp_hi) = mle::genpoisson_interval(&gp)?;
    for (name, problem, init, bracket) in [
        (
            "mle-gamma-shape(c0=0.7)",
            mle::gamma_alpha_problem(0.7)?,
            (0.05, 50.0),
            (1e-3, 1e3),
        ),
        (
            "mle-weibull(1..5)",
            mle::weibull_problem(&sample(&[1.0, 2.0, 3.0, 4.0, 5.0])?)?,
            (0.05, 20.0),
            (1e-3, 50.0),
        ),
        (
            "mle-zeta(1,2,3,4)",
            mle::zeta_problem(&sample(&[1.0, 2.0, 3.0, 4.0])?)?,
            (1.01, 10.0),
            (1.001, 50.0),
        ),
        (
            "mle-yule-simon(2,2,5,9)",
            mle::yule_simon_problem(&sample(&[2.0, 2.0, 5.0, 9.0])?)?,
            (0.01, 50.0),
            (1e-6, 100.0),
        ),
        (
            "mle-gamma-poisson(0,1,1,2,5,8)",
            mle::gamma_poisson_problem(&sample(&[0.0, 1.0, 1.0, 2.0, 5.0, 8.0])?)?,
            (0.01, 20.0),
            (1e-3, 1e3),
        ),
        (
            "mle-gen-poisson(3..7)",
            mle::genpoisson_problem(&gp)?,
            (gp_lo + 1e-6, gp_hi - 1e-6),
            (gp_lo + 1e-9, gp_hi - 1e-12),
        ),
    ] {
        let objective = problem.objective.clone();
        out.push(
            ProblemInstance::new(name, objective, init, bracket)
                .with_rule(Algorithm::UsFlb, problem)
                .with_opts(mle_opts),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub problem: String,
    pub algorithms: Vec<Algorithm>,
    pub n_reps: usize,
    /// Initial values are drawn from `U(lo, hi)`.
    pub init: (f64, f64),
    pub seed: u64,
    pub opts: SolveOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    pub percentage_converged: f64,
    /// Mean iteration count over converged runs.
    pub mean_iterations: f64,
    pub total_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub problem: String,
    pub n_reps: usize,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn row(&self, algorithm: Algorithm) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }

    /// CSV with header `algorithm,percentage,mean_iters,time_s`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm,percentage,mean_iters,time_s\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.algorithm, r.percentage_converged, r.mean_iterations, r.total_time_seconds
            ));
        }
        out
    }
}

/// Initial value of repetition `rep`: its own ChaCha8 stream of `seed`, so
/// the draw does not depend on scheduling.
pub fn initial_value(seed: u64, rep: usize, init: (f64, f64)) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng.gen_range(init.0..init.1)
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, AppError> {
    if spec.n_reps == 0 {
        return Err(AppError::DomainError("n_reps must be at least 1"));
    }
    if !(spec.init.0 < spec.init.1) {
        return Err(AppError::DomainError("init range must satisfy lo < hi"));
    }
    let problem = problem_by_id(&spec.problem)?;
    let available = problem.algorithms();
    if let Some(a) = spec.algorithms.iter().find(|a| !available.contains(a)) {
        return Err(AppError::UnknownAlgorithm(format!("{a} on {}", spec.problem)));
    }
    let inits: Vec<f64> = (0..spec.n_reps)
        .map(|i| initial_value(spec.seed, i, spec.init))
        .collect();
    let mut rows = Vec::new();
    for &algorithm in &spec.algorithms {
        let start = Instant::now();
        let outcomes: Vec<Option<usize>> = inits
            .par_iter()
            .map(|&x0| match problem.run(algorithm, x0, &spec.opts) {
                Ok(r) if r.converged() => Some(r.n_iters),
                _ => None,
            })
            .collect();
        let elapsed = start.elapsed().as_secs_f64();
        let iters: Vec<usize> = outcomes.into_iter().flatten().collect();
        let mean = if iters.is_empty() {
            0.0
        } else {
            iters.iter().sum::<usize>() as f64 / iters.len() as f64
        };
        rows.push(ReportRow {
            algorithm,
            percentage_converged: 100.0 * iters.len() as f64 / spec.n_reps as f64,
            mean_iterations: mean,
            total_time_seconds: elapsed,
        });
    }
    Ok(ExperimentReport {
        problem: spec.problem.clone(),
        n_reps: spec.n_reps,
        seed: spec.seed,
        rows,
    })
}

/// Named benchmark groups: `table2a`, `table2b` (polynomial, U(0, 2)) and
/// `table3` (the four normal-quantile cases, U(−4, 4)).
pub fn bench_experiment(name: &str, n_reps: usize, seed: u64) -> Result<Vec<ExperimentReport>, AppError> {
    let specs: Vec<ExperimentSpec> = match name {
        "table2a" | "table2b" => {
            let us = problem_by_id(name)?.us_algorithms()[0];
            vec![ExperimentSpec {
                problem: name.to_string(),
                algorithms: vec![us, Algorithm::Newton, Algorithm::Bisection],
                n_reps,
                init: (0.0, 2.0),
                seed,
                opts: SolveOptions::default(),
            }]
        }
        "table3" => [(0.01, -2.0), (0.01, 2.0), (0.9, -2.0), (0.9, 2.0)]
            .into_iter()
            .map(|(p, mu)| ExperimentSpec {
                problem: format!("table3-p{p}-mu{mu}"),
                algorithms: vec![
                    Algorithm::UsSlub,
                    Algorithm::UsTlb,
                    Algorithm::Newton,
                    Algorithm::Bisection,
                ],
                n_reps,
                init: (-4.0, 4.0),
                seed,
                opts: SolveOptions::default(),
            })
            .collect(),
        other => return Err(AppError::UnknownProblem(other.to_string())),
    };
    specs.iter().map(run_experiment).collect()
}

/// One column of the cosine example trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceColumn {
    pub x0: f64,
    pub root: f64,
    pub records: Vec<IterationRecord>,
}

/// The cosine example from `x0 = −1` and `x0 = 2` with `b1 = −(π/2+1)`, stopping at
/// `|g| ≤ TABLE1_TOL_G`; `eps` and `rate` are filled against the root solved to
/// machine precision.
pub fn table1_trace() -> Vec<TraceColumn> {
    let obj = example1_objective();
    let bound = BoundSpec::FlbConstant { b1: EXAMPLE1_B1 };
    let exact = SolveOptions {
        tol_g: 1e-16,
        tol_x: 1e-16,
        max_iter: 200,
        ..SolveOptions::default()
    };
    let root = us_solve(&obj, &bound, 0.0, &exact).map(|r| r.root).unwrap_or(f64::NAN);
    let opts = SolveOptions {
        tol_g: TABLE1_TOL_G,
        tol_x: 1e-15,
        ..SolveOptions::default()
    }
    .with_trace();
    [-1.0, 2.0]
        .into_iter()
        .map(|x0| {
            let mut records = us_solve(&obj, &bound, x0, &opts).map(|r| r.trace).unwrap_or_default();
            fill_reference(&mut records, root);
            TraceColumn { x0, root, records }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{us_step_slub, us_step_tlb};

    #[test]
    fn appendix_d_iterates() {
        let p = polynomial_problem(1.0, -3.0, 1.0, 1.0, 3.0, 2.0).unwrap();
        let r = p
            .run(Algorithm::UsTlb, 0.0, &SolveOptions::default().with_trace())
            .unwrap();
        let xs: Vec<f64> = r.trace.iter().map(|t| t.theta).collect();
        assert!((xs[1] - 0.767_591_9).abs() < 1e-6);
        assert!((xs[2] - 0.994_182_91).abs() < 1e-6);
        assert!((r.root - 1.0).abs() < 1e-7 && r.n_iters <= 5);
    }

    #[test]
    fn polynomial_step_matches_generic_bounds() {
        for id in ["table2a", "table2b"] {
            let p = problem_by_id(id).unwrap();
            let poly = match id {
                "table2a" => Polynomial {
                    a3: -1.0,
                    a2: 1.0,
                    a1: -1.0,
                    a0: 1.0,
                    m: 3.0,
                    a_max: 2.0,
                },
                _ => Polynomial {
                    a3: 1.0,
                    a2: -3.0,
                    a1: -1.0,
                    a0: 1.0,
                    m: 3.0,
                    a_max: 2.0,
                },
            };
            for k in 1..40 {
                let x = 2.0 * k as f64 / 40.0;
                let g = p.objective.g(x);
                let closed = poly.step(x, g).unwrap();
                let generic = match poly.bound() {
                    BoundSpec::Slub { b21, b22 } => us_step_slub(&p.objective, b21, b22, x),
                    BoundSpec::Tlb { b3 } => us_step_tlb(&p.objective, b3, x),
                    _ => unreachable!(),
                };
                if let Ok(generic) = generic {
                    assert!((closed - generic).abs() < 1e-10, "{id} at {x}: {closed} vs {generic}");
                }
            }
        }
    }

    #[test]
    fn polynomial_roots_by_oracle() {
        let a = problem_by_id("table2a").unwrap().oracle_root().unwrap();
        let b = problem_by_id("table2b").unwrap().oracle_root().unwrap();
        assert!((a - 1.0).abs() < 1e-12);
        assert!((b - 0.460_811_1).abs() < 1e-7);
    }

    #[test]
    fn zero_at_start_does_not_move() {
        let p = problem_by_id("table2a").unwrap();
        let r = p.run(Algorithm::UsSlub, 1.0, &SolveOptions::default()).unwrap();
        assert_eq!((r.root, r.n_iters), (1.0, 0));
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(problem_by_id("nope"), Err(AppError::UnknownProblem(_))));
        assert!(matches!(
            "nope".parse::<Algorithm>(),
            Err(AppError::UnknownAlgorithm(_))
        ));
        let spec = ExperimentSpec {
            problem: "table2a".into(),
            algorithms: vec![Algorithm::UsTlb],
            n_reps: 1,
            init: (0.0, 2.0),
            seed: 1,
            opts: SolveOptions::default(),
        };
        assert!(matches!(run_experiment(&spec), Err(AppError::UnknownAlgorithm(_))));
    }

    #[test]
    fn report_is_seeded_and_serializable() {
        let run = || bench_experiment("table2b", 64, 5).unwrap().remove(0);
        let (a, b) = (run(), run());
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(
                (x.percentage_converged, x.mean_iterations),
                (y.percentage_converged, y.mean_iterations)
            );
        }
        let back: ExperimentReport = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
        assert!(a
            .to_csv()
            .starts_with("algorithm,percentage,mean_iters,time_s\nus_tlb,100,"));
    }

    #[test]
    fn table1_first_rows() {
        let cols = table1_trace();
        assert!((cols[0].records[1].theta + 0.611_015).abs() < 5e-7);
        assert!((cols[0].records[1].g_value - 1.184_71).abs() < 5e-6);
        assert!((cols[1].records[2].theta - 0.609_850).abs() < 5e-7);
        assert_eq!(cols[0].records.len() - 1, 10);
        assert!(cols[1].records.len() - 1 <= 8);
    }
}
