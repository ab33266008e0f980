//! Closed real intervals.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

/// Tolerance used when checking endpoint ordering of computed intervals.
pub const ORDER_TOL: f64 = 1e-12;

/// A nonempty closed interval `[lo, hi]` of reals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum IntervalError {
    #[error("empty interval: lower bound {lo} exceeds upper bound {hi}")]
    Empty { lo: f64, hi: f64 },
    #[error("interval endpoint is not finite: [{lo}, {hi}]")]
    NotFinite { lo: f64, hi: f64 },
}

impl Interval {
    /// Builds `[lo, hi]`, rejecting empty or non-finite input.
    ///
    /// A reversed pair within [`ORDER_TOL`] is accepted and collapsed to its
    /// midpoint, since such pairs come from accumulated interpolation error.
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NotFinite { lo, hi });
        }
        if lo <= hi {
            Ok(Self { lo, hi })
        } else if lo - hi <= ORDER_TOL {
            let m = 0.5 * (lo + hi);
            Ok(Self { lo: m, hi: m })
        } else {
            Err(IntervalError::Empty { lo, hi })
        }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn contains_with_tol(&self, p: f64, tol: f64) -> bool {
        self.lo - tol <= p && p <= self.hi + tol
    }

    /// `true` when `other` lies inside `self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn encloses_with_tol(&self, other: &Interval, tol: f64) -> bool {
        self.lo - tol <= other.lo && other.hi <= self.hi + tol
    }

    /// Multiplication by a real scalar; endpoints swap for negative factors.
    pub fn scale(&self, beta: f64) -> Self {
        let a = beta * self.lo;
        let b = beta * self.hi;
        if beta >= 0.0 {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    /// Largest absolute value over the interval.
    pub fn magnitude(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    /// Exact range of `a * b` over the two intervals: min and max of the four
    /// endpoint products.
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
