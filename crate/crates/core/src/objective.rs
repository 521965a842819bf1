use std::fmt;
use std::sync::Arc;

use crate::domain::Domain;
use crate::error::SolverError;

/// A re-entrant scalar function.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Wraps a closure as an [`Evaluator`].
pub fn evaluator<F>(f: F) -> Evaluator
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

/// A target function `g` with optional derivatives and its domain, in
/// whatever orientation the caller wrote it.
#[derive(Clone)]
pub struct Objective {
    pub g: Evaluator,
    pub g1: Option<Evaluator>,
    pub g2: Option<Evaluator>,
    pub g3: Option<Evaluator>,
    pub domain: Domain,
}

impl Objective {
    pub fn new<F>(g: F, domain: Domain) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            g: Arc::new(g),
            g1: None,
            g2: None,
            g3: None,
            domain,
        }
    }

    pub fn with_d1<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.g1 = Some(Arc::new(f));
        self
    }

    pub fn with_d2<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.g2 = Some(Arc::new(f));
        self
    }

    pub fn with_d3<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.g3 = Some(Arc::new(f));
        self
    }

    /// `-g` together with negated derivatives.
    pub fn negated(&self) -> Self {
        let neg = |f: &Evaluator| -> Evaluator {
            let f = Arc::clone(f);
            Arc::new(move |x| -f(x))
        };
        Self {
            g: neg(&self.g),
            g1: self.g1.as_ref().map(neg),
            g2: self.g2.as_ref().map(neg),
            g3: self.g3.as_ref().map(neg),
            domain: self.domain,
        }
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("g1", &self.g1.is_some())
            .field("g2", &self.g2.is_some())
            .field("g3", &self.g3.is_some())
            .field("domain", &self.domain)
            .finish()
    }
}

/// An objective stored so that `g > 0` left of the root and `g < 0` right of it.
#[derive(Clone, Debug)]
pub struct OrientedObjective {
    inner: Objective,
    flipped: bool,
}

impl OrientedObjective {
    /// Trusts the caller that `objective` already has the positive-then-negative shape.
    pub fn assume_oriented(objective: Objective) -> Self {
        Self {
            inner: objective,
            flipped: false,
        }
    }

    /// Stores `-objective`, for functions known to be negative left of the root.
    pub fn assume_flipped(objective: Objective) -> Self {
        Self {
            inner: objective.negated(),
            flipped: true,
        }
    }

    pub fn flipped(&self) -> bool {
        self.flipped
    }

    pub fn domain(&self) -> Domain {
        self.inner.domain
    }

    pub fn objective(&self) -> &Objective {
        &self.inner
    }

    pub fn g(&self, x: f64) -> f64 {
        (self.inner.g)(x)
    }

    pub fn g1(&self, x: f64) -> Result<f64, SolverError> {
        self.inner
            .g1
            .as_ref()
            .map(|f| f(x))
            .ok_or(SolverError::MissingDerivative(1))
    }

    pub fn g2(&self, x: f64) -> Result<f64, SolverError> {
        self.inner
            .g2
            .as_ref()
            .map(|f| f(x))
            .ok_or(SolverError::MissingDerivative(2))
    }

    pub fn g3(&self, x: f64) -> Result<f64, SolverError> {
        self.inner
            .g3
            .as_ref()
            .map(|f| f(x))
            .ok_or(SolverError::MissingDerivative(3))
    }
}

const HALF_GRID: usize = 8;

/// The 17 probe points: the probe itself plus eight on each side, dense near
/// the probe and spreading out geometrically toward each end.
pub fn probe_grid(domain: &Domain, probe: f64) -> Vec<f64> {
    let scale = probe.abs().max(1.0);
    let side = |end: Option<f64>, dir: f64| -> Vec<f64> {
        (0..HALF_GRID)
            .map(|k| match end {
                Some(e) => {
                    let frac = 0.5f64.powi((HALF_GRID - 1 - k) as i32);
                    probe + (e - probe) * frac
                }
                None => probe + dir * scale * 0.125 * 2f64.powi(2 * k as i32),
            })
            .collect()
    };
    let mut left = side(domain.probe_lo(), -1.0);
    left.reverse();
    let right = side(domain.probe_hi(), 1.0);
    let mut grid = left;
    grid.push(probe);
    grid.extend(right);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Decides the sign convention of `objective` from a coarse probe grid and
/// negates it if needed so that it is positive left of the root.
pub fn orient(objective: Objective, probe: f64) -> Result<OrientedObjective, SolverError> {
    if !objective.domain.contains(probe) {
        return Err(SolverError::StartOutsideDomain(probe));
    }
    let grid = probe_grid(&objective.domain, probe);
    let mut values = Vec::with_capacity(grid.len());
    for &x in &grid {
        let v = (objective.g)(x);
        if !v.is_finite() {
            return Err(SolverError::NonFiniteEvaluation(x));
        }
        values.push(v);
    }
    let signs: Vec<f64> = values.iter().filter(|v| **v != 0.0).map(|v| v.signum()).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let positive_first = match changes {
        0 => {
            // No crossing seen: follow the overall trend, a decreasing function
            // already has the right shape.
            values.last() <= values.first()
        }
        1 => signs[0] > 0.0,
        n => return Err(SolverError::AmbiguousOrientation(n)),
    };
    Ok(if positive_first {
        OrientedObjective::assume_oriented(objective)
    } else {
        OrientedObjective::assume_flipped(objective)
    })
}
