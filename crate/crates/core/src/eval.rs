//! Metrics, set-distance binning, label corruption and dataset splitting.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;
use crate::vector::{BinaryVector, PartialVector, PredictionSet};

/// Incorrectness and completeness of one partial prediction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub incorrectness: f64,
    pub completeness: f64,
    pub decided: usize,
    pub abstained: usize,
    pub wrong: usize,
}

impl MetricsRecord {
    pub fn evaluate(pred: &PartialVector, truth: &BinaryVector) -> Result<Self> {
        if pred.m() != truth.m() {
            return Err(Error::DimensionMismatch { expected: pred.m(), found: truth.m() });
        }
        let decided = pred.decided_count();
        let wrong = (0..pred.m()).filter(|&i| pred.get(i).is_some_and(|v| v != truth.get(i))).count();
        Ok(Self {
            incorrectness: if decided == 0 { 0.0 } else { wrong as f64 / decided as f64 },
            completeness: decided as f64 / pred.m() as f64,
            decided,
            abstained: pred.star_count(),
            wrong,
        })
    }
}

/// Fraction of decided labels that are wrong; 0 when nothing is decided.
pub fn incorrectness(pred: &PartialVector, truth: &BinaryVector) -> Result<f64> {
    MetricsRecord::evaluate(pred, truth).map(|r| r.incorrectness)
}

/// Fraction of labels decided.
pub fn completeness(pred: &PartialVector) -> f64 {
    pred.decided_count() as f64 / pred.m() as f64
}

/// Number of vectors the partial vector adds on top of the exact set.
///
/// Fails with [`Error::ContainmentViolated`] when the expansion misses an exact member.
pub fn set_distance(approx: &PartialVector, exact: &PredictionSet) -> Result<u64> {
    if approx.m() != exact.m() {
        return Err(Error::DimensionMismatch { expected: exact.m(), found: approx.m() });
    }
    let card = approx.cardinality();
    if !exact.iter().all(|y| approx.contains(&y)) {
        return Err(Error::ContainmentViolated { approx: card as usize, exact: exact.len() });
    }
    Ok(card - exact.len() as u64)
}

/// Percentages of distances in the bins `0`, `(0, 2^m/4]`, `(2^m/4, 2^m/2]` and above.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DistanceBins {
    pub q0: f64,
    pub q25: f64,
    pub q50: f64,
    pub q100: f64,
}

impl DistanceBins {
    pub fn as_array(&self) -> [f64; 4] {
        [self.q0, self.q25, self.q50, self.q100]
    }
}

pub fn bin_distances(ds: &[u64], m: usize) -> DistanceBins {
    if ds.is_empty() {
        return DistanceBins::default();
    }
    let size = (1u64 << m) as f64;
    let mut counts = [0usize; 4];
    for &d in ds {
        let d = d as f64;
        let k = if d == 0.0 {
            0
        } else if d <= size / 4.0 {
            1
        } else if d <= size / 2.0 {
            2
        } else {
            3
        };
        counts[k] += 1;
    }
    let pct = |c: usize| 100.0 * c as f64 / ds.len() as f64;
    DistanceBins { q0: pct(counts[0]), q25: pct(counts[1]), q50: pct(counts[2]), q100: pct(counts[3]) }
}

/// What happens to a selected label cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum CorruptionKind {
    /// The value is removed.
    Missing,
    /// The bit is inverted.
    Reversing,
    /// The value is redrawn from Bernoulli(`beta`).
    Flipping { beta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorruptionSpec {
    #[serde(flatten)]
    pub kind: CorruptionKind,
    /// Share of cells to corrupt, in percent.
    pub percentage: f64,
    /// Select the percentage within each label column instead of over the whole grid.
    #[serde(default)]
    pub per_column: bool,
}

impl CorruptionSpec {
    pub fn new(kind: CorruptionKind, percentage: f64) -> Result<Self> {
        let spec = Self { kind, percentage, per_column: false };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=100.0).contains(&self.percentage) {
            return Err(Error::InvalidParameter { name: "percentage", value: self.percentage, reason: "must lie in [0, 100]" });
        }
        if let CorruptionKind::Flipping { beta } = self.kind {
            if !(0.0..=1.0).contains(&beta) {
                return Err(Error::InvalidParameter { name: "beta", value: beta, reason: "must lie in [0, 1]" });
            }
        }
        Ok(())
    }
}

/// Corrupts `round(percentage · n · m / 100)` distinct cells, chosen uniformly.
///
/// Cells already missing stay missing under reversing and flipping.
pub fn corrupt<R: rand::Rng + ?Sized>(
    labels: &[Vec<Option<bool>>],
    spec: &CorruptionSpec,
    rng: &mut R,
) -> Result<Vec<Vec<Option<bool>>>> {
    spec.validate()?;
    let n = labels.len();
    let m = labels.first().map_or(0, Vec::len);
    if let Some(row) = labels.iter().position(|r| r.len() != m) {
        return Err(Error::Dataset { row, message: format!("expected {m} labels, found {}", labels[row].len()) });
    }
    let mut out = labels.to_vec();
    let cells: Vec<(usize, usize)> = if spec.per_column {
        let k = (spec.percentage * n as f64 / 100.0).round() as usize;
        (0..m).flat_map(|j| sample(rng, n, k).into_iter().map(move |r| (r, j)).collect::<Vec<_>>()).collect()
    } else {
        let k = (spec.percentage * (n * m) as f64 / 100.0).round() as usize;
        sample(rng, n * m, k).into_iter().map(|c| (c / m, c % m)).collect()
    };
    for (r, j) in cells {
        let cell = &mut out[r][j];
        match spec.kind {
            CorruptionKind::Missing => *cell = None,
            CorruptionKind::Reversing => *cell = cell.map(|v| !v),
            CorruptionKind::Flipping { beta } => {
                let draw = rng.gen_bool(beta);
                if cell.is_some() {
                    *cell = Some(draw);
                }
            }
        }
    }
    Ok(out)
}

/// Row indices of a train/test partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Default number of repeats per training fraction in the downsampling protocol.
pub const DOWNSAMPLE_REPEATS: usize = 50;

/// Seeded shuffle, then the first `train_pct` percent of rows for training.
///
/// Every class observed for a label must occur at least twice in `labels`,
/// and both parts must be non-empty.
pub fn downsample_split(labels: &[Vec<Option<bool>>], label_names: &[String], train_pct: u32, trial: u64, seed: u64) -> Result<Split> {
    if !(10..=90).contains(&train_pct) || !train_pct.is_multiple_of(10) {
        return Err(Error::InvalidParameter { name: "train_pct", value: train_pct as f64, reason: "must be one of 10, 20, ..., 90" });
    }
    let n = labels.len();
    let m = labels.first().map_or(0, Vec::len);
    for j in 0..m {
        for class in [false, true] {
            let count = labels.iter().filter(|y| y[j] == Some(class)).count();
            if count == 1 {
                let label = label_names.get(j).cloned().unwrap_or_else(|| j.to_string());
                return Err(Error::InsufficientSupport { label, message: format!("class {} occurs once", class as u8) });
            }
        }
    }
    let n_train = (n as f64 * train_pct as f64 / 100.0).round() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::Dataset { row: 0, message: format!("{n} rows are too few for a {train_pct}% split") });
    }
    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(&mut seed::sub_rng(seed, &[trial, train_pct as u64]));
    let test = rows.split_off(n_train);
    Ok(Split { train: rows, test })
}

/// `shuffles × folds` cross-validation splits, ordered by shuffle then fold.
pub fn cross_validation(n: usize, shuffles: usize, folds: usize, seed: u64) -> Result<Vec<Split>> {
    if folds < 2 || folds > n {
        return Err(Error::InvalidParameter { name: "folds", value: folds as f64, reason: "need 2 <= folds <= rows" });
    }
    let mut splits = Vec::with_capacity(shuffles * folds);
    for r in 0..shuffles {
        let mut rows: Vec<usize> = (0..n).collect();
        rows.shuffle(&mut seed::sub_rng(seed, &[r as u64]));
        for f in 0..folds {
            let (lo, hi) = (f * n / folds, (f + 1) * n / folds);
            let test = rows[lo..hi].to_vec();
            let train = rows[..lo].iter().chain(&rows[hi..]).copied().collect();
            splits.push(Split { train, test });
        }
    }
    Ok(splits)
}

/// One tidy output row of a dataset experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub dataset: String,
    pub method: String,
    pub hyperparameter: f64,
    pub level: f64,
    pub trial: usize,
    #[serde(rename = "IC")]
    pub ic: f64,
    #[serde(rename = "CP")]
    pub cp: f64,
}

pub fn write_metrics_csv<W: std::io::Write>(rows: &[MetricsRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<metrics csv>", e))?;
    Ok(())
}
