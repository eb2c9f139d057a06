use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Convex set of probabilities for a binary event, `[lower, upper] ⊆ [0, 1]`.
///
/// Serializes as the two-element array `[lower, upper]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ProbabilityInterval {
    lower: f64,
    upper: f64,
}

impl ProbabilityInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let ok = lower.is_finite()
            && upper.is_finite()
            && (0.0..=1.0).contains(&lower)
            && (0.0..=1.0).contains(&upper)
            && lower <= upper;
        if ok {
            Ok(Self { lower, upper })
        } else {
            Err(Error::InvalidInterval { lower, upper })
        }
    }

    /// Degenerate interval `[p, p]`.
    pub fn precise(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    /// The vacuous interval `[0, 1]`.
    pub const fn vacuous() -> Self {
        Self { lower: 0.0, upper: 1.0 }
    }

    /// `[max(0, θ − ε), min(θ + ε, 1)]`, the interval used by the random tree generator.
    pub fn around(theta: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidProbability(theta));
        }
        Self::new((theta - epsilon).max(0.0), (theta + epsilon).min(1.0))
    }

    #[inline]
    pub fn lower(&self) -> f64 {
        self.lower
    }

    #[inline]
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// Interval of the complementary event: `[1 − upper, 1 − lower]`.
    pub fn complement(&self) -> Self {
        Self { lower: 1.0 - self.upper, upper: 1.0 - self.lower }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }

    /// True when `other ⊆ self`, up to `tol` on each bound.
    pub fn encloses(&self, other: &Self, tol: f64) -> bool {
        self.lower <= other.lower + tol && other.upper <= self.upper + tol
    }

    /// Minimum of `p·on_one + (1 − p)·on_zero` over the interval.
    ///
    /// Ties pick the lower endpoint.
    #[inline]
    pub fn lower_mix(&self, on_zero: f64, on_one: f64) -> f64 {
        let p = if on_one < on_zero { self.upper } else { self.lower };
        p * on_one + (1.0 - p) * on_zero
    }
}

impl TryFrom<[f64; 2]> for ProbabilityInterval {
    type Error = Error;

    fn try_from([lower, upper]: [f64; 2]) -> Result<Self> {
        Self::new(lower, upper)
    }
}

impl From<ProbabilityInterval> for [f64; 2] {
    fn from(iv: ProbabilityInterval) -> Self {
        [iv.lower, iv.upper]
    }
}

impl fmt::Display for ProbabilityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}
