use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bound::BoundSpec;
use crate::domain::Domain;
use crate::error::SolverError;
use crate::objective::{Evaluator, OrientedObjective};
use crate::poly::{cubic_real_roots, quadratic_real_roots};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Stop once `|g(θ_t)| <= tol_g`.
    pub tol_g: f64,
    /// Stop once a step moves by at most `tol_x`.
    pub tol_x: f64,
    pub max_iter: usize,
    pub record_trace: bool,
    /// Check after every step that the iterates stay one-sided and monotone.
    pub stability_check: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol_g: 1e-8,
            tol_x: 1e-12,
            max_iter: 200,
            record_trace: false,
            stability_check: true,
        }
    }
}

impl SolveOptions {
    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn with_tol_g(mut self, tol_g: f64) -> Self {
        self.tol_g = tol_g;
        self
    }

    pub fn with_tol_x(mut self, tol_x: f64) -> Self {
        self.tol_x = tol_x;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol_g > 0.0) {
            return Err(SolverError::InvalidOptions("tol_g must be positive"));
        }
        if !(self.tol_x > 0.0) {
            return Err(SolverError::InvalidOptions("tol_x must be positive"));
        }
        if self.max_iter == 0 {
            return Err(SolverError::InvalidOptions("max_iter must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    DomainEscape,
    NoAdmissibleStep,
    DegenerateProblem,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Converged => "Converged",
            Self::MaxIterations => "MaxIterations",
            Self::DomainEscape => "DomainEscape",
            Self::NoAdmissibleStep => "NoAdmissibleStep",
            Self::DegenerateProblem => "DegenerateProblem",
        };
        f.write_str(name)
    }
}

/// One row of an iteration trace. `eps` and `rate` are only filled once a
/// reference root is supplied through [`fill_reference`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub theta: f64,
    pub g_value: f64,
    pub eps: Option<f64>,
    pub rate: Option<f64>,
}

impl IterationRecord {
    fn new(t: usize, theta: f64, g_value: f64) -> Self {
        Self {
            t,
            theta,
            g_value,
            eps: None,
            rate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub root: f64,
    pub status: SolveStatus,
    pub n_iters: usize,
    pub n_g_evals: usize,
    pub trace: Vec<IterationRecord>,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

/// Fills `eps = θ_t − root` on every record and `rate = |ε_t / ε_{t−1}|` on
/// every record after the first.
pub fn fill_reference(trace: &mut [IterationRecord], root: f64) {
    let mut prev: Option<f64> = None;
    for rec in trace.iter_mut() {
        let eps = rec.theta - root;
        rec.eps = Some(eps);
        rec.rate = prev.filter(|p| *p != 0.0).map(|p| (eps / p).abs());
        prev = Some(eps);
    }
}

/// One S-step: maps the current iterate (and `g` there) to the next one.
pub trait UpdateRule: Send + Sync {
    fn next(&self, obj: &OrientedObjective, theta_t: f64, g_t: f64, opts: &SolveOptions) -> Result<f64, SolverError>;
}

/// An S-step given in closed form as a function of `(θ_t, g(θ_t))`.
pub struct ClosedFormStep<F>(pub F);

impl<F> UpdateRule for ClosedFormStep<F>
where
    F: Fn(f64, f64) -> Result<f64, SolverError> + Send + Sync,
{
    fn next(&self, _obj: &OrientedObjective, theta_t: f64, g_t: f64, _opts: &SolveOptions) -> Result<f64, SolverError> {
        (self.0)(theta_t, g_t)
    }
}

impl UpdateRule for BoundSpec {
    fn next(&self, obj: &OrientedObjective, theta_t: f64, g_t: f64, opts: &SolveOptions) -> Result<f64, SolverError> {
        match self {
            BoundSpec::Slub { b21, b22 } => slub_step(obj, *b21, *b22, theta_t, g_t),
            BoundSpec::Tlb { b3 } => tlb_step(obj, *b3, theta_t, g_t),
            _ => flb_step(obj, self, theta_t, g_t, opts.tol_x / 10.0),
        }
    }
}

fn direction_of(g_t: f64) -> f64 {
    if g_t > 0.0 {
        1.0
    } else if g_t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn nearest_directed(deltas: &[f64], direction: f64, origin: f64, domain: &Domain) -> Result<f64, SolverError> {
    let mut directed: Vec<f64> = deltas
        .iter()
        .copied()
        .filter(|d| d.is_finite() && d * direction > 0.0)
        .collect();
    if directed.is_empty() {
        return Err(SolverError::NoAdmissibleStep);
    }
    directed.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    directed
        .iter()
        .map(|d| origin + d)
        .find(|x| domain.contains(*x))
        .ok_or(SolverError::DomainEscape(origin + directed[0]))
}

/// Picks the admissible root of `c2·Δ² + c1·Δ + c0` (`Δ = θ − origin`): the
/// one moving in `direction` with the smallest step that stays in `domain`.
pub fn select_directed_root(
    c2: f64,
    c1: f64,
    c0: f64,
    direction: f64,
    origin: f64,
    domain: &Domain,
) -> Result<f64, SolverError> {
    nearest_directed(&quadratic_real_roots(c2, c1, c0), direction.signum(), origin, domain)
}

/// Same selection for a quadratic written in θ itself, `c2·θ² + c1·θ + c0`.
///
/// Roots that agree with `origin` to a few ulps count as a zero step, which
/// keeps a converged iterate from being rejected over rounding in `θ − origin`.
pub fn select_directed_root_theta(
    c2: f64,
    c1: f64,
    c0: f64,
    direction: f64,
    origin: f64,
    domain: &Domain,
) -> Result<f64, SolverError> {
    let roots = quadratic_real_roots(c2, c1, c0);
    let slack = 8.0 * f64::EPSILON * origin.abs().max(f64::MIN_POSITIVE);
    let deltas: Vec<f64> = roots.iter().map(|r| r - origin).collect();
    match nearest_directed(&deltas, direction.signum(), origin, domain) {
        Err(SolverError::NoAdmissibleStep) if deltas.iter().any(|d| d.abs() <= slack) => Ok(origin),
        other => other,
    }
}

fn flb_step(obj: &OrientedObjective, bound: &BoundSpec, theta_t: f64, g_t: f64, tol: f64) -> Result<f64, SolverError> {
    let dir = direction_of(g_t);
    if dir == 0.0 {
        return Ok(theta_t);
    }
    let domain = obj.domain();
    let next = match bound {
        BoundSpec::FlbConstant { b1 } => theta_t - g_t / b1,
        BoundSpec::FlbLinear { b1, b2 } => {
            return select_directed_root(0.5 * b2, b1 + b2 * theta_t, g_t, dir, theta_t, &domain);
        }
        BoundSpec::FlbCustom { b, big_b, .. } => {
            return solve_monotone_surrogate(g_t, b, big_b, theta_t, dir, &domain, tol);
        }
        _ => return Err(SolverError::InvalidBound("not a first-derivative bound")),
    };
    if !next.is_finite() || !domain.contains(next) {
        return Err(SolverError::DomainEscape(next));
    }
    Ok(next)
}

/// Zero of `g_t + B(θ) − B(θ_t)` with `B` strictly decreasing: expand a bracket
/// geometrically in the move direction, then bisect. The end that has not yet
/// crossed is returned, so the step never passes the surrogate's zero.
fn solve_monotone_surrogate(
    g_t: f64,
    b: &Evaluator,
    big_b: &Evaluator,
    theta_t: f64,
    dir: f64,
    domain: &Domain,
    tol: f64,
) -> Result<f64, SolverError> {
    let b_t = big_b(theta_t);
    let phi = |x: f64| g_t + big_b(x) - b_t;
    let end = if dir > 0.0 { domain.hi } else { domain.lo };

    let mut h = (g_t / b(theta_t)).abs();
    if !(h.is_finite() && h > 0.0) {
        h = 1e-8 * theta_t.abs().max(1.0);
    }
    let mut inner = theta_t;
    let mut outer = None;
    for _ in 0..2100 {
        let mut cand = theta_t + dir * h;
        if end.is_finite() && dir * (cand - end) >= 0.0 {
            cand = inner + 0.5 * (end - inner);
            if cand == inner || cand == end {
                break;
            }
        } else {
            h *= 2.0;
        }
        let v = phi(cand);
        if v.is_nan() {
            return Err(SolverError::NonFiniteEvaluation(cand));
        }
        if v == 0.0 {
            return Ok(cand);
        }
        if v.signum() != dir {
            outer = Some(cand);
            break;
        }
        inner = cand;
    }
    let mut outer = outer.ok_or(SolverError::DomainEscape(inner))?;
    while (outer - inner).abs() > tol {
        let mid = 0.5 * (inner + outer);
        if mid == inner || mid == outer {
            break;
        }
        let v = phi(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == dir {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    Ok(inner)
}

fn slub_step(obj: &OrientedObjective, b21: f64, b22: f64, theta_t: f64, g_t: f64) -> Result<f64, SolverError> {
    let dir = direction_of(g_t);
    if dir == 0.0 {
        return Ok(theta_t);
    }
    let b2 = if dir > 0.0 { b21 } else { b22 };
    select_directed_root(0.5 * b2, obj.g1(theta_t)?, g_t, dir, theta_t, &obj.domain())
}

fn tlb_step(obj: &OrientedObjective, b3: f64, theta_t: f64, g_t: f64) -> Result<f64, SolverError> {
    let dir = direction_of(g_t);
    if dir == 0.0 {
        return Ok(theta_t);
    }
    let (g1, g2) = (obj.g1(theta_t)?, obj.g2(theta_t)?);
    if b3 == 0.0 {
        return select_directed_root(0.5 * g2, g1, g_t, dir, theta_t, &obj.domain());
    }
    let deltas = cubic_real_roots(b3 / 6.0, 0.5 * g2, g1, g_t);
    nearest_directed(&deltas, dir, theta_t, &obj.domain())
}

/// One FLB S-step from `theta_t`; `FlbCustom` is refined to `1e-13`.
pub fn us_step_flb(obj: &OrientedObjective, bound: &BoundSpec, theta_t: f64) -> Result<f64, SolverError> {
    bound.check_constants()?;
    flb_step(obj, bound, theta_t, obj.g(theta_t), 1e-13)
}

/// One SLUB S-step: the branch constant is chosen from the move direction
/// (`b21` when moving right, `b22` when moving left).
pub fn us_step_slub(obj: &OrientedObjective, b21: f64, b22: f64, theta_t: f64) -> Result<f64, SolverError> {
    slub_step(obj, b21, b22, theta_t, obj.g(theta_t))
}

/// One TLB S-step: nearest directed real root of the cubic surrogate.
pub fn us_step_tlb(obj: &OrientedObjective, b3: f64, theta_t: f64) -> Result<f64, SolverError> {
    tlb_step(obj, b3, theta_t, obj.g(theta_t))
}

fn status_of(err: &SolverError) -> Option<SolveStatus> {
    match err {
        SolverError::NoAdmissibleStep => Some(SolveStatus::NoAdmissibleStep),
        SolverError::DomainEscape(_) | SolverError::NonFiniteEvaluation(_) => Some(SolveStatus::DomainEscape),
        _ => None,
    }
}

struct Run {
    trace: Vec<IterationRecord>,
    record: bool,
    evals: usize,
}

impl Run {
    fn new(record: bool) -> Self {
        Self {
            trace: Vec::new(),
            record,
            evals: 0,
        }
    }

    fn push(&mut self, t: usize, theta: f64, g: f64) {
        if self.record {
            self.trace.push(IterationRecord::new(t, theta, g));
        }
    }

    fn finish(self, root: f64, status: SolveStatus, n_iters: usize) -> SolveResult {
        SolveResult {
            root,
            status,
            n_iters,
            n_g_evals: self.evals,
            trace: self.trace,
        }
    }
}

/// Runs the US iteration with the S-step built from `bound`.
pub fn us_solve(
    obj: &OrientedObjective,
    bound: &BoundSpec,
    x0: f64,
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    bound.check_constants()?;
    match bound {
        BoundSpec::Slub { .. } => {
            obj.g1(x0)?;
        }
        BoundSpec::Tlb { .. } => {
            obj.g1(x0)?;
            obj.g2(x0)?;
        }
        _ => {}
    }
    us_solve_with(obj, bound, x0, opts)
}

/// Runs the US iteration with an arbitrary S-step (e.g. a closed form
/// derived for a specific application).
pub fn us_solve_with(
    obj: &OrientedObjective,
    rule: &dyn UpdateRule,
    x0: f64,
    opts: &SolveOptions,
) -> Result<SolveResult, SolverError> {
    opts.validate()?;
    if !obj.domain().contains(x0) {
        return Err(SolverError::StartOutsideDomain(x0));
    }
    let mut run = Run::new(opts.record_trace);
    let mut theta = x0;
    let mut g = obj.g(theta);
    run.evals += 1;
    run.push(0, theta, g);
    if !g.is_finite() {
        return Ok(run.finish(theta, SolveStatus::DegenerateProblem, 0));
    }
    let d0 = direction_of(g);

    for t in 1..=opts.max_iter {
        if g.abs() <= opts.tol_g {
            return Ok(run.finish(theta, SolveStatus::Converged, t - 1));
        }
        let next = match rule.next(obj, theta, g, opts) {
            Ok(x) => x,
            Err(e) => match status_of(&e) {
                Some(status) => return Ok(run.finish(theta, status, t - 1)),
                None => return Err(e),
            },
        };
        if !next.is_finite() || !obj.domain().contains(next) {
            return Ok(run.finish(theta, SolveStatus::DomainEscape, t - 1));
        }
        let g_next = obj.g(next);
        run.evals += 1;
        run.push(t, next, g_next);
        if !g_next.is_finite() {
            return Ok(run.finish(next, SolveStatus::DegenerateProblem, t));
        }
        if opts.stability_check {
            let backwards = (next - theta) * d0 < 0.0;
            let crossed = g_next.abs() > opts.tol_g && direction_of(g_next) != d0;
            if backwards || crossed {
                return Ok(run.finish(next, SolveStatus::DegenerateProblem, t));
            }
        }
        let step = (next - theta).abs();
        theta = next;
        g = g_next;
        if step <= opts.tol_x {
            return Ok(run.finish(theta, SolveStatus::Converged, t));
        }
    }
    let status = if g.abs() <= opts.tol_g {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterations
    };
    Ok(run.finish(theta, status, opts.max_iter))
}

/// Newton–Raphson baseline. Iterates that leave the domain or become
/// non-finite end with `DomainEscape`; a vanishing slope ends with
/// `NoAdmissibleStep`.
pub fn newton_solve(obj: &OrientedObjective, x0: f64, opts: &SolveOptions) -> Result<SolveResult, SolverError> {
    opts.validate()?;
    obj.g1(x0)?;
    if !obj.domain().contains(x0) {
        return Err(SolverError::StartOutsideDomain(x0));
    }
    let mut run = Run::new(opts.record_trace);
    let mut theta = x0;
    let mut g = obj.g(theta);
    run.evals += 1;
    run.push(0, theta, g);
    for t in 1..=opts.max_iter {
        if !g.is_finite() {
            return Ok(run.finish(theta, SolveStatus::DomainEscape, t - 1));
        }
        if g.abs() <= opts.tol_g {
            return Ok(run.finish(theta, SolveStatus::Converged, t - 1));
        }
        let slope = obj.g1(theta)?;
        if !(slope.abs() >= 1e-300) {
            return Ok(run.finish(theta, SolveStatus::NoAdmissibleStep, t - 1));
        }
        let next = theta - g / slope;
        if !next.is_finite() || !obj.domain().contains(next) {
            return Ok(run.finish(theta, SolveStatus::DomainEscape, t - 1));
        }
        g = obj.g(next);
        run.evals += 1;
        run.push(t, next, g);
        let step = (next - theta).abs();
        theta = next;
        if step <= opts.tol_x && g.is_finite() {
            return Ok(run.finish(theta, SolveStatus::Converged, t));
        }
    }
    let status = if g.abs() <= opts.tol_g {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterations
    };
    Ok(run.finish(theta, status, opts.max_iter))
}

/// Classic bisection on `[lo, hi]`; one iteration is one halving.
pub fn bisection_solve<F>(g: F, lo: f64, hi: f64, opts: &SolveOptions) -> Result<SolveResult, SolverError>
where
    F: Fn(f64) -> f64,
{
    opts.validate()?;
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (g_lo, g_hi) = (g(lo), g(hi));
    let mut run = Run::new(opts.record_trace);
    run.evals += 2;
    if g_lo == 0.0 {
        return Ok(run.finish(lo, SolveStatus::Converged, 0));
    }
    if g_hi == 0.0 {
        return Ok(run.finish(hi, SolveStatus::Converged, 0));
    }
    if !(g_lo * g_hi < 0.0) {
        return Err(SolverError::BracketInvalid { g_lo, g_hi });
    }
    let lo_positive = g_lo > 0.0;
    let mut t = 0;
    while hi - lo > opts.tol_x {
        if t == opts.max_iter {
            return Ok(run.finish(0.5 * (lo + hi), SolveStatus::MaxIterations, t));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        t += 1;
        let gm = g(mid);
        run.evals += 1;
        run.push(t, mid, gm);
        if gm.abs() <= opts.tol_g {
            return Ok(run.finish(mid, SolveStatus::Converged, t));
        }
        if (gm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(run.finish(0.5 * (lo + hi), SolveStatus::Converged, t))
}
