use serde::{Deserialize, Serialize};

use crate::error::SolverError;

/// An interval of the real line, possibly unbounded, with per-endpoint openness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Domain {
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<Self, SolverError> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(SolverError::InvalidDomain { lo, hi });
        }
        // An infinite endpoint can never be attained.
        let lo_open = lo_open || lo.is_infinite();
        let hi_open = hi_open || hi.is_infinite();
        Ok(Self {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_open: true,
            hi_open: true,
        }
    }

    /// The open interval `(lo, hi)`.
    pub fn open(lo: f64, hi: f64) -> Result<Self, SolverError> {
        Self::new(lo, hi, true, true)
    }

    /// The closed interval `[lo, hi]` (infinite endpoints stay open).
    pub fn closed(lo: f64, hi: f64) -> Result<Self, SolverError> {
        Self::new(lo, hi, false, false)
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }

    /// The lowest point used for probing: the endpoint itself when closed,
    /// nudged inward by `1e-8·span` when open. `None` for an infinite end.
    pub fn probe_lo(&self) -> Option<f64> {
        if !self.lo.is_finite() {
            return None;
        }
        Some(if self.lo_open {
            self.inward(self.lo, 1.0)
        } else {
            self.lo
        })
    }

    pub fn probe_hi(&self) -> Option<f64> {
        if !self.hi.is_finite() {
            return None;
        }
        Some(if self.hi_open {
            self.inward(self.hi, -1.0)
        } else {
            self.hi
        })
    }

    fn inward(&self, end: f64, dir: f64) -> f64 {
        let offset = if self.is_bounded() {
            1e-8 * self.span()
        } else {
            1e-8 * end.abs().max(1.0)
        };
        end + dir * offset
    }
}
