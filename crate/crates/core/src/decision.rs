//! Skeptical decision rules under Hamming loss for arbitrary credal sets.
//!
//! [`maximal_set_subsets`] computes the exact maximal set with `3^m − 1`
//! lower-expectation evaluations: for an index set `I` and an assignment `a_I`,
//! every vector agreeing with `a_I` dominates its counterpart agreeing with the
//! complement `ā_I` (same remaining labels) iff `E̲[ℓ*_H(ā_I, ·)] > |I|/2`,
//! so all vectors with `y_I = ā_I` can be discarded at once.
//!
//! [`maximal_set_naive`] is the pairwise `2^m(2^m − 1)` reference, valid for
//! any loss, and [`eadmissible_set_finite`] handles explicit finite credal sets.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::interval::ProbabilityInterval;
use crate::tree::{CostVector, ImpreciseBinaryTree, MAX_TREE_DEPTH};
use crate::vector::{check_enumerable, Assignment, BinaryVector, PartialVector, PredictionSet};

/// Absolute tolerance for strict dominance tests; values within it never dominate.
pub const TOLERANCE: f64 = 1e-9;

/// Label limit of [`maximal_set_subsets`].
pub const SUBSET_MAX_LABELS: usize = 14;

/// Label limit of the pairwise and finite-set rules.
pub const NAIVE_MAX_LABELS: usize = 8;

/// A credal set seen through its lower expectation functional.
pub trait CredalOracle {
    fn m(&self) -> usize;

    fn lower_expectation(&self, cost: &CostVector) -> f64;

    fn upper_expectation(&self, cost: &CostVector) -> f64 {
        -self.lower_expectation(&cost.negate())
    }
}

impl CredalOracle for ImpreciseBinaryTree {
    fn m(&self) -> usize {
        ImpreciseBinaryTree::m(self)
    }

    fn lower_expectation(&self, cost: &CostVector) -> f64 {
        ImpreciseBinaryTree::lower_expectation(self, cost)
    }
}

/// Explicit list of joint distributions over the `2^m` outcomes (indexed by mask).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteCredalSet {
    m: usize,
    distributions: Vec<Vec<f64>>,
}

impl FiniteCredalSet {
    pub fn new(m: usize, distributions: Vec<Vec<f64>>) -> Result<Self> {
        if m == 0 || m > MAX_TREE_DEPTH {
            return Err(Error::LabelCount(m, MAX_TREE_DEPTH));
        }
        if distributions.is_empty() {
            return Err(Error::InvalidDistribution { index: 0, reason: "credal set is empty".into() });
        }
        for (index, p) in distributions.iter().enumerate() {
            if p.len() != 1 << m {
                return Err(Error::InvalidDistribution {
                    index,
                    reason: format!("{} entries, expected {}", p.len(), 1 << m),
                });
            }
            if p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                return Err(Error::InvalidDistribution { index, reason: "negative or non-finite entry".into() });
            }
            let total: f64 = p.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidDistribution { index, reason: format!("sums to {total}") });
            }
        }
        Ok(Self { m, distributions })
    }

    pub fn distributions(&self) -> &[Vec<f64>] {
        &self.distributions
    }

    pub fn expectation(&self, index: usize, cost: &CostVector) -> f64 {
        self.distributions[index].iter().zip(cost.as_slice()).map(|(p, c)| p * c).sum()
    }
}

impl CredalOracle for FiniteCredalSet {
    fn m(&self) -> usize {
        self.m
    }

    fn lower_expectation(&self, cost: &CostVector) -> f64 {
        assert_eq!(cost.m(), self.m, "cost vector and credal set have different label counts");
        (0..self.distributions.len()).map(|k| self.expectation(k, cost)).fold(f64::INFINITY, f64::min)
    }
}

/// Loss `ℓ(prediction, truth)` tabulated over `{0,1}^m × {0,1}^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct LossMatrix {
    m: usize,
    entries: Vec<f64>,
}

impl LossMatrix {
    pub fn from_fn(m: usize, f: impl Fn(BinaryVector, BinaryVector) -> f64) -> Result<Self> {
        check_enumerable("loss matrix", m, NAIVE_MAX_LABELS)?;
        if m == 0 {
            return Err(Error::LabelCount(m, NAIVE_MAX_LABELS));
        }
        let n = 1u32 << m;
        let mut entries = Vec::with_capacity((n * n) as usize);
        for pred in 0..n {
            for truth in 0..n {
                entries.push(f(BinaryVector::from_raw(m, pred), BinaryVector::from_raw(m, truth)));
            }
        }
        Ok(Self { m, entries })
    }

    pub fn hamming(m: usize) -> Result<Self> {
        Self::from_fn(m, |a, b| crate::vector::hamming_loss(&a, &b) as f64)
    }

    pub fn zero_one(m: usize) -> Result<Self> {
        Self::from_fn(m, |a, b| if a == b { 0.0 } else { 1.0 })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, prediction: &BinaryVector, truth: &BinaryVector) -> f64 {
        self.entries[((prediction.bits() as usize) << self.m) + truth.bits() as usize]
    }

    /// `ℓ(prediction, ·)` as a cost vector.
    pub fn row(&self, prediction: &BinaryVector) -> CostVector {
        let start = (prediction.bits() as usize) << self.m;
        CostVector::new(self.m, self.entries[start..start + (1 << self.m)].to_vec()).expect("row length")
    }

    /// `ℓ(worse, ·) − ℓ(better, ·)`; a positive lower expectation means `better ≻ worse`.
    pub fn difference(&self, worse: &BinaryVector, better: &BinaryVector) -> CostVector {
        let n = 1usize << self.m;
        let w = (worse.bits() as usize) << self.m;
        let b = (better.bits() as usize) << self.m;
        let costs = (0..n).map(|t| self.entries[w + t] - self.entries[b + t]).collect();
        CostVector::new(self.m, costs).expect("row length")
    }
}

/// Bayes-optimal Hamming prediction from precise marginals: `ŷ_i = 1` iff `p_i ≥ 1/2`.
pub fn precise_bayes_hamming(marginals: &[f64]) -> Result<BinaryVector> {
    if let Some(&bad) = marginals.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidProbability(bad));
    }
    BinaryVector::from_labels(&marginals.iter().map(|&p| p >= 0.5).collect::<Vec<_>>())
}

/// Cost vector of `ℓ*_H(ā_I, ·)`, i.e. the number of indices of `I` where `y` agrees with `a`.
pub fn agreement_cost(a: &Assignment) -> CostVector {
    let m = a.m();
    let (indices, values) = (a.index_mask(), a.value_mask());
    let costs = (0..1u32 << m).map(|y| (!(y ^ values) & indices).count_ones() as f64).collect();
    CostVector::new(m, costs).expect("cost length")
}

/// `E̲[ℓ*_H(ā_I, ·)] = inf_P Σ_{i∈I} P(Y_i = a_i)`.
pub fn dominance_value<O: CredalOracle + ?Sized>(oracle: &O, a: &Assignment) -> Result<f64> {
    if a.m() != oracle.m() {
        return Err(Error::DimensionMismatch { expected: oracle.m(), found: a.m() });
    }
    Ok(oracle.lower_expectation(&agreement_cost(a)))
}

/// True iff vectors agreeing with `a` on `I` dominate, under maximality, the vectors
/// agreeing with its complement on `I` and equal elsewhere.
pub fn dominance_check<O: CredalOracle + ?Sized>(oracle: &O, a: &Assignment) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::InvalidParameter { name: "assignment size", value: 0.0, reason: "index set must be non-empty" });
    }
    let value = dominance_value(oracle, a)?;
    Ok(value > a.len() as f64 / 2.0 + TOLERANCE)
}

/// Knobs for [`maximal_set_subsets_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SubsetOptions {
    /// Skip a check when every vector it could remove is already gone.
    pub skip_removed: bool,
}

/// A decision rule's output together with the number of lower expectations it evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalOutcome {
    pub set: PredictionSet,
    pub checks: u64,
}

struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        Self { words }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    fn ones(&self, len: usize) -> Vec<u32> {
        (0..len).filter(|&i| self.get(i)).map(|i| i as u32).collect()
    }
}

/// Exact maximal set under Hamming loss (default options).
pub fn maximal_set_subsets<O: CredalOracle + ?Sized>(oracle: &O) -> Result<MaximalOutcome> {
    maximal_set_subsets_with(oracle, SubsetOptions::default())
}

/// Exact maximal set under Hamming loss.
///
/// Index sets are visited by increasing size, lexicographically within a size;
/// removals take effect immediately.
pub fn maximal_set_subsets_with<O: CredalOracle + ?Sized>(oracle: &O, options: SubsetOptions) -> Result<MaximalOutcome> {
    let m = oracle.m();
    check_enumerable("exact maximality", m, SUBSET_MAX_LABELS)?;
    let n = 1usize << m;
    let mut alive = Bitset::full(n);
    let mut checks = 0u64;

    for size in 1..=m {
        for subset in (0..m).combinations(size) {
            let index_mask = subset.iter().fold(0u32, |acc, &i| acc | 1 << (m - 1 - i));
            for word in 0..1u32 << size {
                // spread the `size` bits of `word` onto the positions of `subset`, first index most significant
                let values = subset
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| word >> (size - 1 - k) & 1 == 1)
                    .fold(0u32, |acc, (_, &i)| acc | 1 << (m - 1 - i));
                let a = Assignment::from_raw(m, index_mask, values);
                let loser = !values & index_mask;
                let hits = |y: usize| (y as u32) & index_mask == loser;
                if options.skip_removed && !(0..n).any(|y| hits(y) && alive.get(y)) {
                    continue;
                }
                checks += 1;
                if oracle.lower_expectation(&agreement_cost(&a)) > size as f64 / 2.0 + TOLERANCE {
                    for y in (0..n).filter(|&y| hits(y)) {
                        alive.clear(y);
                    }
                }
            }
        }
    }
    Ok(MaximalOutcome { set: PredictionSet::from_sorted_masks(m, alive.ones(n)), checks })
}

/// Maximal set by exhaustive pairwise comparison under an arbitrary loss.
///
/// `y''` dominates `y'` iff `E̲[ℓ(y', ·) − ℓ(y'', ·)] > 0`. Every ordered pair is
/// evaluated, so `checks == 2^m (2^m − 1)`.
pub fn maximal_set_naive<O: CredalOracle + ?Sized>(oracle: &O, loss: &LossMatrix) -> Result<MaximalOutcome> {
    let m = oracle.m();
    check_enumerable("pairwise maximality", m, NAIVE_MAX_LABELS)?;
    if loss.m() != m {
        return Err(Error::DimensionMismatch { expected: m, found: loss.m() });
    }
    let n = 1u32 << m;
    let mut checks = 0u64;
    let mut alive = Vec::new();
    for worse in 0..n {
        let y_worse = BinaryVector::from_raw(m, worse);
        let mut dominated = false;
        for better in (0..n).filter(|&b| b != worse) {
            checks += 1;
            let diff = loss.difference(&y_worse, &BinaryVector::from_raw(m, better));
            if oracle.lower_expectation(&diff) > TOLERANCE {
                dominated = true;
            }
        }
        if !dominated {
            alive.push(worse);
        }
    }
    Ok(MaximalOutcome { set: PredictionSet::from_sorted_masks(m, alive), checks })
}

/// Union over the listed distributions of their expected-loss minimizers (ties kept).
pub fn eadmissible_set_finite(credal: &FiniteCredalSet, loss: &LossMatrix) -> Result<PredictionSet> {
    let m = credal.m;
    check_enumerable("E-admissibility", m, NAIVE_MAX_LABELS)?;
    if loss.m() != m {
        return Err(Error::DimensionMismatch { expected: m, found: loss.m() });
    }
    let rows: Vec<CostVector> = (0..1u32 << m).map(|b| loss.row(&BinaryVector::from_raw(m, b))).collect();
    let mut admissible = Vec::new();
    for k in 0..credal.distributions.len() {
        let risks: Vec<f64> = rows.iter().map(|r| credal.expectation(k, r)).collect();
        let best = risks.iter().copied().fold(f64::INFINITY, f64::min);
        admissible.extend(risks.iter().enumerate().filter(|(_, &r)| r <= best + TOLERANCE).map(|(y, _)| y as u32));
    }
    admissible.sort_unstable();
    admissible.dedup();
    Ok(PredictionSet::from_sorted_masks(m, admissible))
}

/// Partial vector built label-wise from marginal bounds on `P(Y_i = 1)`:
/// `1` if the lower bound exceeds 1/2, `0` if the upper bound is below 1/2, `*` otherwise.
///
/// Comparisons use [`TOLERANCE`], so bounds within it of 1/2 abstain.
pub fn outer_partial_vector(marginals: &[ProbabilityInterval]) -> Result<PartialVector> {
    let entries: Vec<Option<bool>> = marginals
        .iter()
        .map(|iv| {
            if iv.lower() > 0.5 + TOLERANCE {
                Some(true)
            } else if iv.upper() < 0.5 - TOLERANCE {
                Some(false)
            } else {
                None
            }
        })
        .collect();
    PartialVector::from_entries(&entries)
}

/// Theoretical evaluation counts `(naive, subset) = (2^m (2^m − 1), 3^m − 1)`.
pub fn check_counts(m: u32) -> (u128, u128) {
    let n = 1u128 << m;
    (n * (n - 1), 3u128.pow(m) - 1)
}

/// `{0,1}^m` as a prediction set.
pub fn full_set(m: usize) -> Result<PredictionSet> {
    PartialVector::all_star(m)?.expand()
}
