//! `us-solve`: command-line front end for the US solvers.

mod data;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use upcross::experiments::{self, Algorithm, ProblemInstance, TABLE1_TOL_G};
use upcross::mle::{self, FitResult, Sample};
use upcross::multiroot::{self, SweepConfig};
use upcross::pvalues::{self, EqualTailResult};
use upcross::quantiles::{self, QuantileMethod};
use upcross::{evaluator, fill_reference, AppError, Domain, SolveOptions, SolveResult, SolverError};

use output::{Envelope, Format, Payload};

const EXIT_USAGE: u8 = 1;
const EXIT_STATUS: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(
    name = "us-solve",
    version,
    about = "Root finding with upper-crossing/solution (US) iterations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "plain")]
    format: Format,
    /// Significant digits for printed numbers.
    #[arg(long, global = true, default_value_t = 10)]
    digits: usize,
    /// Include the iteration trace.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Args, Clone, Copy)]
struct Tolerances {
    #[arg(long)]
    tol_g: Option<f64>,
    #[arg(long)]
    tol_x: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

impl Tolerances {
    fn apply(self, base: SolveOptions) -> SolveOptions {
        SolveOptions {
            tol_g: self.tol_g.unwrap_or(base.tol_g),
            tol_x: self.tol_x.unwrap_or(base.tol_x),
            max_iter: self.max_iter.unwrap_or(base.max_iter),
            ..base
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a named problem.
    Solve {
        /// example1, poly, table2a, table2b or table3-p<p>-mu<mu>.
        #[arg(long)]
        problem: String,
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        /// Coefficients a3,a2,a1,a0 of a3·x^m + a2·x² + a1·x + a0 (poly only).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<f64>>,
        /// The exponent m (poly only).
        #[arg(long, default_value_t = 3.0)]
        order: f64,
        /// Right end of the interval [0, a] (poly only).
        #[arg(long, default_value_t = 2.0)]
        amax: f64,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Quantile of a distribution.
    Quantile {
        #[arg(long, value_enum)]
        dist: QuantileDist,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Skew-normal shape, or the first beta shape.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Second beta shape.
        #[arg(long)]
        beta: Option<f64>,
        /// Surrogate for the normal quantile.
        #[arg(long, value_enum, default_value = "tlb")]
        method: Method,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Equal-density two-sided p-value.
    Pvalue {
        #[arg(long, value_enum)]
        test: TestKind,
        #[arg(long)]
        obs: f64,
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        nu2: Option<u32>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Maximum likelihood fit from a file of numbers.
    Fit {
        #[arg(long, value_enum)]
        dist: FitDist,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Every root on an interval by alternating sweeps.
    Roots {
        /// Built-in target: toy63 is 1 − x/2 − 2·sin x.
        #[arg(long, conflicts_with = "poly")]
        problem: Option<String>,
        /// Polynomial coefficients, highest degree first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        poly: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        interval: Vec<f64>,
        /// Lower bound of g′; estimated on a grid when absent.
        #[arg(long, allow_hyphen_values = true)]
        flb_g: Option<f64>,
        /// Lower bound of −g′; estimated on a grid when absent.
        #[arg(long, allow_hyphen_values = true)]
        flb_neg_g: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        #[arg(long, default_value_t = 64)]
        max_roots: usize,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Reproduce a comparison table with seeded random starts.
    Bench {
        /// table2a, table2b or table3.
        #[arg(long)]
        experiment: String,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 2026)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Flb,
    Slub,
    Tlb,
    Newton,
    Bisection,
}

impl Method {
    fn algorithm(self) -> Algorithm {
        match self {
            Self::Flb => Algorithm::UsFlb,
            Self::Slub => Algorithm::UsSlub,
            Self::Tlb => Algorithm::UsTlb,
            Self::Newton => Algorithm::Newton,
            Self::Bisection => Algorithm::Bisection,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantileDist {
    Normal,
    SkewNormal,
    Beta,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestKind {
    Chisq,
    F,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitDist {
    Gamma,
    Weibull,
    Zeta,
    YuleSimon,
    GammaPoisson,
    GenPoisson,
}

enum Failure {
    Usage(String),
    Data(String),
    Status(String, String),
}

impl From<AppError> for Failure {
    fn from(e: AppError) -> Self {
        let usage = match &e {
            AppError::DomainError(_) | AppError::UnknownProblem(_) | AppError::UnknownAlgorithm(_) => true,
            AppError::Solver(s) => matches!(
                s,
                SolverError::InvalidDomain { .. }
                    | SolverError::InvalidOptions(_)
                    | SolverError::InvalidBound(_)
                    | SolverError::StartOutsideDomain(_)
            ),
            _ => false,
        };
        if usage {
            Failure::Usage(e.to_string())
        } else {
            Failure::Status(error_name(&e), e.to_string())
        }
    }
}

fn error_name(e: &AppError) -> String {
    match e {
        AppError::Solver(s) => variant_name(&format!("{s:?}")),
        AppError::Special(s) => variant_name(&format!("{s:?}")),
        other => other.name().to_string(),
    }
}

fn variant_name(debug: &str) -> String {
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or(debug)
        .to_string()
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok((env, code)) => {
            print!("{}", env.render(cli.format, cli.digits));
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("us-solve: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("us-solve: data error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Status(name, msg)) => {
            eprintln!("us-solve: {name}: {msg}");
            ExitCode::from(EXIT_STATUS)
        }
    }
}

fn run(cli: &Cli) -> Result<(Envelope, u8), Failure> {
    match &cli.command {
        Command::Solve {
            problem,
            method,
            x0,
            coeffs,
            order,
            amax,
            tol,
        } => cmd_solve(cli, problem, *method, *x0, coeffs.as_deref(), *order, *amax, *tol),
        Command::Quantile {
            dist,
            p,
            mu,
            sigma,
            alpha,
            beta,
            method,
            x0,
            tol,
        } => cmd_quantile(cli, *dist, *p, *mu, *sigma, *alpha, *beta, *method, *x0, *tol),
        Command::Pvalue {
            test,
            obs,
            nu,
            nu2,
            tol,
        } => cmd_pvalue(cli, *test, *obs, *nu, *nu2, *tol),
        Command::Fit { dist, data, x0, tol } => cmd_fit(*dist, data, *x0, *tol),
        Command::Roots {
            problem,
            poly,
            interval,
            flb_g,
            flb_neg_g,
            epsilon,
            max_roots,
            tol,
        } => cmd_roots(
            problem.as_deref(),
            poly.as_deref(),
            interval,
            *flb_g,
            *flb_neg_g,
            *epsilon,
            *max_roots,
            *tol,
        ),
        Command::Bench { experiment, reps, seed } => {
            let reports = experiments::bench_experiment(experiment, *reps, *seed)?;
            Ok((
                Envelope {
                    payload: Payload::Reports(reports),
                    status: "Completed".into(),
                    trace: None,
                },
                0,
            ))
        }
    }
}

fn solve_envelope(
    cli: &Cli,
    mut result: SolveResult,
    mut fields: Map<String, Value>,
    reference: Option<f64>,
) -> (Envelope, u8) {
    let code = if result.converged() { 0 } else { EXIT_STATUS };
    if let Some(root) = reference {
        fill_reference(&mut result.trace, root);
    }
    fields.insert("root".into(), json!(result.root));
    fields.insert("n_iters".into(), json!(result.n_iters));
    fields.insert("n_g_evals".into(), json!(result.n_g_evals));
    let mut env = Envelope::record(fields, result.status.to_string());
    if cli.trace {
        env.trace = Some(result.trace);
    }
    (env, code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    cli: &Cli,
    id: &str,
    method: Option<Method>,
    x0: Option<f64>,
    coeffs: Option<&[f64]>,
    order: f64,
    amax: f64,
    tol: Tolerances,
) -> Result<(Envelope, u8), Failure> {
    let problem: ProblemInstance = if id == "poly" {
        let c = coeffs.ok_or_else(|| usage("--problem poly needs --coeffs a3,a2,a1,a0"))?;
        let [a3, a2, a1, a0] = c else {
            return Err(usage("--coeffs takes exactly four values a3,a2,a1,a0"));
        };
        experiments::polynomial_problem(*a3, *a2, *a1, *a0, order, amax)?
    } else {
        experiments::problem_by_id(id)?
    };
    let algorithm = match method {
        Some(m) => m.algorithm(),
        None => problem.us_algorithms()[0],
    };
    if !problem.algorithms().contains(&algorithm) {
        return Err(usage(format!("method {algorithm} is not available for {}", problem.id)));
    }
    let mut base = if algorithm.is_us() {
        problem.opts
    } else {
        SolveOptions::default()
    };
    if id == "example1" {
        base.tol_g = TABLE1_TOL_G;
    }
    let mut opts = tol.apply(base);
    opts.record_trace = cli.trace;
    let x0 = x0.unwrap_or(problem.init.0);
    let result = problem.run(algorithm, x0, &opts)?;
    let reference = if cli.trace { problem.oracle_root().ok() } else { None };
    let mut fields = Map::new();
    fields.insert("problem".into(), json!(problem.id));
    fields.insert("method".into(), json!(algorithm.name()));
    fields.insert("x0".into(), json!(x0));
    Ok(solve_envelope(cli, result, fields, reference))
}

#[allow(clippy::too_many_arguments)]
fn cmd_quantile(
    cli: &Cli,
    dist: QuantileDist,
    p: f64,
    mu: f64,
    sigma: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    method: Method,
    x0: Option<f64>,
    tol: Tolerances,
) -> Result<(Envelope, u8), Failure> {
    let mut opts = tol.apply(SolveOptions::default().with_max_iter(5000));
    opts.record_trace = cli.trace;
    let mut fields = Map::new();
    fields.insert("p".into(), json!(p));
    let result = match dist {
        QuantileDist::Normal => {
            let method = match method {
                Method::Flb => QuantileMethod::Flb,
                Method::Slub => QuantileMethod::Slub,
                Method::Tlb => QuantileMethod::Tlb,
                _ => return Err(usage("normal quantiles take --method flb, slub or tlb")),
            };
            quantiles::normal_quantile(p, mu, sigma, x0, method, &opts)?
        }
        QuantileDist::SkewNormal => {
            let alpha = alpha.ok_or_else(|| usage("skew-normal needs --alpha"))?;
            quantiles::skew_normal_quantile(p, mu, sigma, alpha, x0, &opts)?
        }
        QuantileDist::Beta => {
            let (a, b) = match (alpha, beta) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(usage("beta needs --alpha and --beta")),
            };
            if a < 1.0 && b < 1.0 {
                quantiles::beta_quantile_small_params(p, a, b, x0, &opts)?
            } else {
                let obj = quantiles::beta_quantile_objective(p, a, b)?;
                let bound = quantiles::beta_bound(a, b)?;
                upcross::us_solve(&obj, &bound, x0.unwrap_or(a / (a + b)), &opts).map_err(AppError::from)?
            }
        }
    };
    fields.insert("quantile".into(), json!(result.root));
    let (env, code) = solve_envelope(cli, result, fields, None);
    Ok((env, code))
}

fn cmd_pvalue(
    cli: &Cli,
    test: TestKind,
    obs: f64,
    nu: u32,
    nu2: Option<u32>,
    tol: Tolerances,
) -> Result<(Envelope, u8), Failure> {
    let mut opts = tol.apply(SolveOptions::default());
    opts.record_trace = cli.trace;
    let r: EqualTailResult = match test {
        TestKind::Chisq => pvalues::chisq_equal_density_pvalue(obs, nu, &opts)?,
        TestKind::F => {
            let nu2 = nu2.ok_or_else(|| usage("the F test needs --nu2"))?;
            pvalues::f_equal_density_pvalue(obs, nu, nu2, &opts)?
        }
    };
    let mut fields = Map::new();
    fields.insert("p_value".into(), json!(r.p_value));
    fields.insert("matched_point".into(), json!(r.matched_point));
    fields.insert("side".into(), serde_json::to_value(r.side).expect("serializable"));
    fields.insert("n_iters".into(), json!(r.solver.n_iters));
    let mut env = Envelope::record(fields, r.solver.status.to_string());
    if cli.trace {
        env.trace = Some(r.solver.trace);
    }
    Ok((env, 0))
}

fn cmd_fit(dist: FitDist, path: &std::path::Path, x0: Option<f64>, tol: Tolerances) -> Result<(Envelope, u8), Failure> {
    let values = data::read_numbers(path).map_err(|e| Failure::Data(e.to_string()))?;
    let sample = Sample::new(values)?;
    let opts = tol.apply(SolveOptions::default().with_max_iter(1_000_000));
    let fit: FitResult = match dist {
        FitDist::Gamma => mle::gamma_fit(&sample, &opts)?,
        FitDist::Weibull => mle::weibull_fit(&sample, x0, &opts)?,
        FitDist::Zeta => mle::zeta_theta_mle(&sample, x0, &opts)?,
        FitDist::YuleSimon => mle::yule_simon_mle(&sample, x0, &opts)?,
        FitDist::GammaPoisson => mle::gamma_poisson_fit(&sample, x0, &opts)?,
        FitDist::GenPoisson => mle::genpoisson_theta_mle(&sample, x0, &opts)?,
    };
    let mut fields = Map::new();
    fields.insert(
        "parameters".into(),
        serde_json::to_value(&fit.parameters).expect("serializable"),
    );
    fields.insert("score_residual".into(), json!(fit.log_likelihood_gradient_at_root));
    fields.insert("n_iters".into(), json!(fit.solver.n_iters));
    Ok((Envelope::record(fields, fit.solver.status.to_string()), 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_roots(
    problem: Option<&str>,
    poly: Option<&[f64]>,
    interval: &[f64],
    flb_g: Option<f64>,
    flb_neg_g: Option<f64>,
    epsilon: f64,
    max_roots: usize,
    tol: Tolerances,
) -> Result<(Envelope, u8), Failure> {
    let g = match (problem, poly) {
        (Some("toy63"), None) => multiroot::sine_line_objective(),
        (Some(other), None) => return Err(usage(format!("unknown roots problem: {other}"))),
        (None, Some(c)) if !c.is_empty() => {
            let c = c.to_vec();
            evaluator(move |x: f64| c.iter().fold(0.0, |acc, a| acc * x + a))
        }
        _ => return Err(usage("roots needs --problem toy63 or --poly c_n,...,c_0")),
    };
    let [lo, hi] = interval else {
        return Err(usage("--interval takes lo,hi"));
    };
    let domain = Domain::open(*lo, *hi).map_err(AppError::from)?;
    let (est_g, est_neg) = match (flb_g, flb_neg_g) {
        (Some(a), Some(b)) => (a, b),
        _ => multiroot::estimate_flb_constants(&g, &domain, 4096)?,
    };
    let mut config = SweepConfig::new(domain, flb_g.unwrap_or(est_g), flb_neg_g.unwrap_or(est_neg));
    config.epsilon = epsilon;
    config.max_roots = max_roots;
    config.opts = tol.apply(SolveOptions::default().with_max_iter(10_000));
    let solves = multiroot::sweep_solves(g, &config)?;
    let mut fields = Map::new();
    fields.insert("roots".into(), json!(solves.iter().map(|r| r.root).collect::<Vec<_>>()));
    fields.insert("count".into(), json!(solves.len()));
    fields.insert("flb_g".into(), json!(config.flb_g));
    fields.insert("flb_neg_g".into(), json!(config.flb_neg_g));
    Ok((Envelope::record(fields, "Converged"), 0))
}
