//! Binary-relevance credal sets: independent marginals `P(Y_i = 1) ∈ [l_i, u_i]`.
//!
//! Under Hamming loss the label-wise partial vector of [`br_skeptical_prediction`]
//! is both the exact E-admissible set and the exact maximal set. The module also
//! provides interval dominance and the Γ-minimax / Γ-minimin point rules.

use serde::{Deserialize, Serialize};

use crate::decision::{outer_partial_vector, TOLERANCE};
use crate::error::{Error, Result};
use crate::interval::ProbabilityInterval;
use crate::tree::ImpreciseBinaryTree;
use crate::vector::{check_enumerable, BinaryVector, PartialVector, PredictionSet};

/// Label limit of [`interval_dominance_set`].
pub const ID_MAX_LABELS: usize = 14;

/// `m` independent marginal intervals for `P(Y_i = 1)`.
///
/// Serializes as a JSON list of `[lower, upper]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarginalIntervalModel {
    intervals: Vec<ProbabilityInterval>,
}

impl MarginalIntervalModel {
    pub fn new(intervals: Vec<ProbabilityInterval>) -> Self {
        Self { intervals }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let intervals = pairs.iter().map(|&(l, u)| ProbabilityInterval::new(l, u)).collect::<Result<_>>()?;
        Ok(Self { intervals })
    }

    pub fn m(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[ProbabilityInterval] {
        &self.intervals
    }

    /// Tree whose every node at depth `i` carries the `i`-th marginal.
    pub fn to_tree(&self) -> Result<ImpreciseBinaryTree> {
        ImpreciseBinaryTree::from_marginals(&self.intervals)
    }

    /// `(E̲[ℓ_H(y, ·)], Ē[ℓ_H(y, ·)])`: label-wise sums of the bounds on `P(Y_i ≠ y_i)`.
    pub fn hamming_bounds(&self, y: &BinaryVector) -> (f64, f64) {
        assert_eq!(y.m(), self.m(), "vector and model have different label counts");
        self.intervals.iter().enumerate().fold((0.0, 0.0), |(lo, up), (i, iv)| {
            let miss = if y.get(i) { iv.complement() } else { *iv };
            (lo + miss.lower(), up + miss.upper())
        })
    }
}

/// Exact skeptical prediction (E-admissible = maximal set) under Hamming loss.
pub fn br_skeptical_prediction(model: &MarginalIntervalModel) -> Result<PartialVector> {
    outer_partial_vector(&model.intervals)
}

/// Per label, `Some(true)` when choosing 1 is strictly better under the given
/// comparison, `Some(false)` when 0 is, `None` when indifferent within tolerance.
fn labelwise(model: &MarginalIntervalModel, score: impl Fn(&ProbabilityInterval) -> (f64, f64)) -> Result<PartialVector> {
    let entries: Vec<Option<bool>> = model
        .intervals
        .iter()
        .map(|iv| {
            let (for_one, for_zero) = score(iv);
            if for_one > for_zero + TOLERANCE {
                Some(true)
            } else if for_zero > for_one + TOLERANCE {
                Some(false)
            } else {
                None
            }
        })
        .collect();
    PartialVector::from_entries(&entries)
}

/// Γ-minimax: minimizes the upper expected Hamming loss.
///
/// Label `i` is 1 when `P̲(Y_i=1) > P̲(Y_i=0)`, 0 when smaller, `*` when the
/// two choices give the same upper expectation.
pub fn gamma_minimax(model: &MarginalIntervalModel) -> Result<PartialVector> {
    labelwise(model, |iv| (iv.lower(), iv.complement().lower()))
}

/// Γ-minimin: minimizes the lower expected Hamming loss.
///
/// Label `i` is 1 when `P̄(Y_i=1) > P̄(Y_i=0)`, 0 when smaller, `*` on ties.
pub fn gamma_minimin(model: &MarginalIntervalModel) -> Result<PartialVector> {
    labelwise(model, |iv| (iv.upper(), iv.complement().upper()))
}

/// Interval dominance: keeps `y` unless some `y'` has `Ē[ℓ_H(y', ·)] < E̲[ℓ_H(y, ·)]`.
pub fn interval_dominance_set(model: &MarginalIntervalModel) -> Result<PredictionSet> {
    let m = model.m();
    check_enumerable("interval dominance", m, ID_MAX_LABELS)?;
    if m == 0 {
        return Err(Error::LabelCount(0, ID_MAX_LABELS));
    }
    let bounds: Vec<(f64, f64)> = BinaryVector::all(m)?.map(|y| model.hamming_bounds(&y)).collect();
    let best_upper = bounds.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
    let kept = BinaryVector::all(m)?.filter(|y| bounds[y.bits() as usize].0 <= best_upper + TOLERANCE);
    PredictionSet::from_vectors(m, kept)
}
