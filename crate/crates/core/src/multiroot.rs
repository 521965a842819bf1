//! Left-to-right discovery of every simple root on a finite interval.
//!
//! The sweep alternates US solves on `g` and `−g`. Started just right of a
//! root, the FLB iteration climbs monotonically to the next sign change and
//! cannot jump over it, so restarting at `root + ε` with the orientation
//! flipped visits the roots in order.

use serde::{Deserialize, Serialize};

use crate::bound::BoundSpec;
use crate::domain::Domain;
use crate::error::AppError;
use crate::objective::{evaluator, Evaluator, Objective, OrientedObjective};
use crate::solver::{us_solve, SolveOptions, SolveResult, SolveStatus};

const SCAN_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub interval: Domain,
    pub epsilon: f64,
    /// FLB constant for `g`, a lower bound of `g′` on the interval.
    pub flb_g: f64,
    /// FLB constant for `−g`, a lower bound of `−g′` on the interval.
    pub flb_neg_g: f64,
    pub max_roots: usize,
    pub opts: SolveOptions,
}

impl SweepConfig {
    pub fn new(interval: Domain, flb_g: f64, flb_neg_g: f64) -> Self {
        Self {
            interval,
            epsilon: 1e-6,
            flb_g,
            flb_neg_g,
            max_roots: 64,
            opts: SolveOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), AppError> {
        if !self.interval.is_bounded() {
            return Err(AppError::DomainError("the sweep interval must be finite"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= self.interval.span() / 1e3) {
            return Err(AppError::DomainError("epsilon must be positive and at most span/1000"));
        }
        if !(self.flb_g < 0.0 && self.flb_neg_g < 0.0) {
            return Err(AppError::DomainError("both FLB constants must be negative"));
        }
        if self.max_roots == 0 {
            return Err(AppError::DomainError("max_roots must be at least 1"));
        }
        Ok(self.opts.validate()?)
    }
}

fn sign_change_ahead(g: &Evaluator, from: f64, to: f64) -> Result<bool, AppError> {
    let mut prev: Option<f64> = None;
    for k in 0..=SCAN_POINTS {
        let x = from + (to - from) * k as f64 / SCAN_POINTS as f64;
        let v = g(x);
        if !v.is_finite() {
            return Err(AppError::Solver(crate::SolverError::NonFiniteEvaluation(x)));
        }
        if v == 0.0 {
            return Ok(true);
        }
        if prev.is_some_and(|p| p.signum() != v.signum()) {
            return Ok(true);
        }
        prev = Some(v);
    }
    Ok(false)
}

/// `g(x) = 1 − x/2 − 2 sin x`, which has three roots on `(0, 2π)`.
pub fn sine_line_objective() -> Evaluator {
    evaluator(|x: f64| -0.5 * x - 2.0 * x.sin() + 1.0)
}

/// All roots of `g` on the interval, each with its sub-solve result.
pub fn sweep_solves(g: Evaluator, config: &SweepConfig) -> Result<Vec<SolveResult>, AppError> {
    config.validate()?;
    let domain = config.interval;
    let (lo, hi) = (domain.probe_lo().expect("bounded"), domain.probe_hi().expect("bounded"));
    let base = {
        let g = g.clone();
        Objective::new(move |x| g(x), domain)
    };
    let neg = OrientedObjective::assume_oriented(base.negated());
    let pos = OrientedObjective::assume_oriented(base);
    let (pos_bound, neg_bound) = (
        BoundSpec::FlbConstant { b1: config.flb_g },
        BoundSpec::FlbConstant { b1: config.flb_neg_g },
    );

    let mut found: Vec<SolveResult> = Vec::new();
    let mut start = if domain.lo_open { domain.lo + config.epsilon } else { lo };
    while start < hi {
        let g0 = g(start);
        if g0 == 0.0 {
            found.push(SolveResult {
                root: start,
                status: SolveStatus::Converged,
                n_iters: 0,
                n_g_evals: 1,
                trace: Vec::new(),
            });
            start += config.epsilon;
            continue;
        }
        if !sign_change_ahead(&g, start, hi)? {
            break;
        }
        if found.len() == config.max_roots {
            return Err(AppError::MaxRootsExceeded(config.max_roots));
        }
        let (obj, bound) = if g0 > 0.0 {
            (&pos, &pos_bound)
        } else {
            (&neg, &neg_bound)
        };
        let r = us_solve(obj, bound, start, &config.opts)?;
        if r.status != SolveStatus::Converged {
            return Err(AppError::SweepFailed {
                index: found.len(),
                status: r.status,
            });
        }
        start = r.root + config.epsilon;
        found.push(r);
    }
    Ok(found)
}

/// All roots of `g` on the interval in increasing order.
pub fn sweep_roots(g: Evaluator, config: &SweepConfig) -> Result<Vec<f64>, AppError> {
    Ok(sweep_solves(g, config)?.into_iter().map(|r| r.root).collect())
}

/// Heuristic FLB constants `(flb_g, flb_neg_g)` from central differences of
/// `g` on an `n`-point grid, widened by 10% plus `1e-3`. Nothing here proves
/// the bounds hold between grid points.
pub fn estimate_flb_constants(g: &Evaluator, interval: &Domain, n: usize) -> Result<(f64, f64), AppError> {
    let (lo, hi) = match (interval.probe_lo(), interval.probe_hi()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(AppError::DomainError("the interval must be finite")),
    };
    let n = n.max(2);
    let h = (hi - lo) / n as f64 * 1e-3;
    let (mut min_d, mut max_d) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..=n {
        let x = (lo + (hi - lo) * k as f64 / n as f64).clamp(lo + h, hi - h);
        let d = (g(x + h) - g(x - h)) / (2.0 * h);
        if !d.is_finite() {
            return Err(AppError::Solver(crate::SolverError::NonFiniteEvaluation(x)));
        }
        min_d = min_d.min(d);
        max_d = max_d.max(d);
    }
    let widen = |m: f64| m.min(0.0) * 1.1 - 1e-3;
    Ok((widen(min_d), widen(-max_d)))
}
