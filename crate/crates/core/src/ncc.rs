//! Naive credal classifier with the imprecise Dirichlet model, one per label.
//!
//! Conditional probabilities of a feature value given a class are bounded by
//! `[n / (N + s), (n + s) / (N + s)]` where `n` counts the value within the
//! class, `N` counts the class and `s ≥ 0` sets the imprecision. The class
//! prior is the precise empirical frequency. With `s = 0` the posterior
//! interval collapses to the naive Bayes posterior.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::br::MarginalIntervalModel;
use crate::error::{Error, Result};
use crate::interval::ProbabilityInterval;

/// Column-name prefix marking label columns in CSV input.
pub const LABEL_PREFIX: &str = "y:";

/// Token for a missing label value in CSV input.
pub const MISSING_TOKEN: &str = "*";

/// Real-valued features and partially observed binary labels, as read from CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct RawDataset {
    pub feature_names: Vec<String>,
    pub label_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Vec<Option<bool>>>,
}

impl RawDataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file)
    }

    /// Parses CSV with a header row: feature columns first, then `y:`-prefixed label columns.
    ///
    /// Row numbers in errors count the header as row 1.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let header = csv.headers()?.clone();
        let first_label = header.iter().position(|h| h.starts_with(LABEL_PREFIX)).ok_or_else(|| Error::Dataset {
            row: 1,
            message: format!("no label column (prefix {LABEL_PREFIX:?})"),
        })?;
        if first_label == 0 {
            return Err(Error::Dataset { row: 1, message: "no feature column before the label columns".into() });
        }
        if let Some(bad) = header.iter().skip(first_label).find(|h| !h.starts_with(LABEL_PREFIX)) {
            return Err(Error::Dataset { row: 1, message: format!("feature column {bad:?} after the label columns") });
        }
        let feature_names: Vec<String> = header.iter().take(first_label).map(str::to_owned).collect();
        let label_names: Vec<String> =
            header.iter().skip(first_label).map(|h| h[LABEL_PREFIX.len()..].to_owned()).collect();

        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (k, record) in csv.records().enumerate() {
            let row = k + 2;
            let record = record?;
            if record.len() != header.len() {
                return Err(Error::Dataset {
                    row,
                    message: format!("expected {} fields, found {}", header.len(), record.len()),
                });
            }
            let x = record
                .iter()
                .take(first_label)
                .zip(&feature_names)
                .map(|(field, name)| match field.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(Error::Dataset { row, message: format!("feature {name:?}: not a finite number: {field:?}") }),
                })
                .collect::<Result<Vec<_>>>()?;
            let y = record
                .iter()
                .skip(first_label)
                .zip(&label_names)
                .map(|(field, name)| match field {
                    "0" => Ok(Some(false)),
                    "1" => Ok(Some(true)),
                    MISSING_TOKEN => Ok(None),
                    _ => Err(Error::Dataset { row, message: format!("label {name:?}: expected 0, 1 or *, found {field:?}") }),
                })
                .collect::<Result<Vec<_>>>()?;
            features.push(x);
            labels.push(y);
        }
        if features.is_empty() {
            return Err(Error::Dataset { row: 2, message: "no data rows".into() });
        }
        Ok(Self { feature_names, label_names, features, labels })
    }

    /// Writes the CSV layout read by [`RawDataset::from_reader`].
    pub fn to_writer<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let header = self.feature_names.iter().cloned().chain(self.label_names.iter().map(|l| format!("{LABEL_PREFIX}{l}")));
        w.write_record(header)?;
        for (x, y) in self.features.iter().zip(&self.labels) {
            let fields = x.iter().map(|v| v.to_string()).chain(y.iter().map(|v| match v {
                Some(true) => "1".to_owned(),
                Some(false) => "0".to_owned(),
                None => MISSING_TOKEN.to_owned(),
            }));
            w.write_record(fields)?;
        }
        w.flush().map_err(|e| Error::io("<dataset csv>", e))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.to_writer(file)
    }

    pub fn n(&self) -> usize {
        self.features.len()
    }

    pub fn m(&self) -> usize {
        self.label_names.len()
    }

    /// Rows `rows` in the given order.
    pub fn subset(&self, rows: &[usize]) -> Self {
        Self {
            feature_names: self.feature_names.clone(),
            label_names: self.label_names.clone(),
            features: rows.iter().map(|&r| self.features[r].clone()).collect(),
            labels: rows.iter().map(|&r| self.labels[r].clone()).collect(),
        }
    }

    /// Label rows with every value observed; errors name the first missing cell.
    pub fn complete_labels(&self) -> Result<Vec<Vec<bool>>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .map(|v| v.ok_or_else(|| Error::Dataset { row: r + 2, message: "missing label in evaluation data".into() }))
                    .collect()
            })
            .collect()
    }
}

/// Equal-width bins for one feature, learned from its column minimum and maximum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinEdges {
    pub min: f64,
    pub width: f64,
    pub bins: usize,
}

impl BinEdges {
    /// Bin of `x`; values outside the training range fall into the first or last bin.
    pub fn bin(&self, x: f64) -> usize {
        if self.width <= 0.0 {
            return 0;
        }
        let b = ((x - self.min) / self.width).floor();
        if b <= 0.0 {
            0
        } else {
            (b as usize).min(self.bins - 1)
        }
    }
}

/// Per-feature equal-width discretization into `z` intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretizer {
    edges: Vec<BinEdges>,
}

impl Discretizer {
    /// Learns bin edges from the columns of `features`; a constant column gets a single bin.
    pub fn fit(features: &[Vec<f64>], z: usize) -> Result<Self> {
        if z < 2 {
            return Err(Error::InvalidParameter { name: "z", value: z as f64, reason: "at least two bins are required" });
        }
        let d = features.first().map_or(0, Vec::len);
        let mut edges = Vec::with_capacity(d);
        for i in 0..d {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (r, row) in features.iter().enumerate() {
                let v = *row.get(i).ok_or(Error::DimensionMismatch { expected: d, found: row.len() })?;
                if !v.is_finite() {
                    return Err(Error::Dataset { row: r, message: format!("feature {i} is not finite") });
                }
                lo = lo.min(v);
                hi = hi.max(v);
            }
            edges.push(if hi > lo {
                BinEdges { min: lo, width: (hi - lo) / z as f64, bins: z }
            } else {
                BinEdges { min: lo, width: 0.0, bins: 1 }
            });
        }
        Ok(Self { edges })
    }

    pub fn edges(&self) -> &[BinEdges] {
        &self.edges
    }

    /// Number of values each feature can take after discretization.
    pub fn arity(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.bins).collect()
    }

    pub fn transform_row(&self, x: &[f64]) -> Result<Vec<usize>> {
        if x.len() != self.edges.len() {
            return Err(Error::DimensionMismatch { expected: self.edges.len(), found: x.len() });
        }
        Ok(x.iter().zip(&self.edges).map(|(&v, e)| e.bin(v)).collect())
    }

    pub fn transform(&self, raw: &RawDataset) -> Result<DiscreteDataset> {
        let features = raw.features.iter().map(|x| self.transform_row(x)).collect::<Result<Vec<_>>>()?;
        DiscreteDataset::new(self.arity(), features, raw.labels.clone())
    }
}

/// Equal-width discretization of a real matrix into `z` bins per column.
pub fn discretize(features: &[Vec<f64>], z: usize) -> Result<Vec<Vec<usize>>> {
    let disc = Discretizer::fit(features, z)?;
    features.iter().map(|x| disc.transform_row(x)).collect()
}

/// Discrete features with declared domains and partially observed labels.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDataset {
    arity: Vec<usize>,
    features: Vec<Vec<usize>>,
    labels: Vec<Vec<Option<bool>>>,
}

impl DiscreteDataset {
    pub fn new(arity: Vec<usize>, features: Vec<Vec<usize>>, labels: Vec<Vec<Option<bool>>>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: features.len(), found: labels.len() });
        }
        let m = labels.first().map_or(0, Vec::len);
        for (r, (x, y)) in features.iter().zip(&labels).enumerate() {
            if x.len() != arity.len() {
                return Err(Error::Dataset { row: r, message: format!("expected {} features, found {}", arity.len(), x.len()) });
            }
            if let Some((i, v)) = x.iter().enumerate().find(|(i, &v)| v >= arity[*i]) {
                return Err(Error::Dataset { row: r, message: format!("feature {i} value {v} outside domain 0..{}", arity[i]) });
            }
            if y.len() != m {
                return Err(Error::Dataset { row: r, message: format!("expected {m} labels, found {}", y.len()) });
            }
        }
        Ok(Self { arity, features, labels })
    }

    pub fn n(&self) -> usize {
        self.features.len()
    }

    pub fn d(&self) -> usize {
        self.arity.len()
    }

    pub fn m(&self) -> usize {
        self.labels.first().map_or(0, Vec::len)
    }

    pub fn arity(&self) -> &[usize] {
        &self.arity
    }

    pub fn features(&self) -> &[Vec<usize>] {
        &self.features
    }

    pub fn labels(&self) -> &[Vec<Option<bool>>] {
        &self.labels
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct LabelTable {
    /// Observed instances per class, indexed by the class value.
    class_counts: [u64; 2],
    /// `counts[i][v][y]`: instances of class `y` with feature `i` equal to `v`.
    counts: Vec<Vec<[u64; 2]>>,
}

impl LabelTable {
    fn log_bounds(&self, x: &[usize], class: usize, s: f64) -> (f64, f64) {
        let total = self.class_counts[class] as f64 + s;
        let mut lower = 0.0;
        let mut upper = 0.0;
        for (i, &v) in x.iter().enumerate() {
            let n = self.counts[i].get(v).map_or(0, |c| c[class]) as f64;
            lower += (n / total).ln();
            upper += ((n + s) / total).ln();
        }
        (lower, upper)
    }
}

/// `a / (a + b)` for `a = e^la`, `b = e^lb`, without overflow.
fn ratio(la: f64, lb: f64) -> Option<f64> {
    match (la == f64::NEG_INFINITY, lb == f64::NEG_INFINITY) {
        (true, true) => None,
        (true, false) => Some(0.0),
        (false, true) => Some(1.0),
        (false, false) => Some(1.0 / (1.0 + (lb - la).exp())),
    }
}

/// Fitted count tables for every label, plus the discretization they were learned on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NccModel {
    s: f64,
    arity: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bin_edges: Option<Vec<BinEdges>>,
    labels: Vec<LabelTable>,
}

impl NccModel {
    /// Counts every (feature value, class) pair; rows missing label `j` are skipped for label `j` only.
    pub fn fit(data: &DiscreteDataset, s: f64) -> Result<Self> {
        check_s(s)?;
        let tables = (0..data.m())
            .map(|j| {
                let mut table = LabelTable {
                    class_counts: [0; 2],
                    counts: data.arity.iter().map(|&z| vec![[0; 2]; z]).collect(),
                };
                for (x, y) in data.features.iter().zip(&data.labels) {
                    if let Some(class) = y[j] {
                        let c = class as usize;
                        table.class_counts[c] += 1;
                        for (i, &v) in x.iter().enumerate() {
                            table.counts[i][v][c] += 1;
                        }
                    }
                }
                table
            })
            .collect();
        Ok(Self { s, arity: data.arity.clone(), bin_edges: None, labels: tables })
    }

    /// Discretizes `raw` with `z` equal-width bins and fits on the result; the edges are kept for prediction.
    pub fn fit_raw(raw: &RawDataset, z: usize, s: f64) -> Result<Self> {
        let disc = Discretizer::fit(&raw.features, z)?;
        let mut model = Self::fit(&disc.transform(raw)?, s)?;
        model.bin_edges = Some(disc.edges);
        Ok(model)
    }

    /// Same counts under a different imprecision level.
    pub fn with_s(&self, s: f64) -> Result<Self> {
        check_s(s)?;
        Ok(Self { s, ..self.clone() })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn arity(&self) -> &[usize] {
        &self.arity
    }

    /// `(N_0, N_1)`: observed instances per class for label `j`.
    pub fn class_counts(&self, j: usize) -> (u64, u64) {
        let c = self.labels[j].class_counts;
        (c[0], c[1])
    }

    /// True when both classes of label `j` were observed; otherwise predictions are vacuous.
    pub fn is_supported(&self, j: usize) -> bool {
        self.labels[j].class_counts.iter().all(|&c| c > 0)
    }

    /// Bounds `[n / (N + s), (n + s) / (N + s)]` on `P(X_i = v | Y_j = class)`.
    pub fn conditional_interval(&self, j: usize, i: usize, v: usize, class: bool) -> Result<ProbabilityInterval> {
        let table = self.table(j)?;
        let c = class as usize;
        let total = table.class_counts[c] as f64 + self.s;
        if total == 0.0 {
            return Ok(ProbabilityInterval::vacuous());
        }
        let n = table.counts.get(i).ok_or(Error::IndexOutOfRange { index: i, m: self.arity.len() })?.get(v).map_or(0, |c2| c2[c]) as f64;
        ProbabilityInterval::new(n / total, ((n + self.s) / total).min(1.0))
    }

    /// Discretizes a raw feature row with the stored bin edges.
    pub fn discretize_row(&self, x: &[f64]) -> Result<Vec<usize>> {
        let edges = self.bin_edges.as_ref().ok_or(Error::Parse { what: "bin edges", input: "model fitted on discrete data".into() })?;
        if x.len() != edges.len() {
            return Err(Error::DimensionMismatch { expected: edges.len(), found: x.len() });
        }
        Ok(x.iter().zip(edges).map(|(&v, e)| e.bin(v)).collect())
    }

    /// Bounds on `P(Y_j = 1 | x)`.
    ///
    /// The lower bound is `D / (D + N)` with `D = P(1)·Π P̲(x_i|1)` and
    /// `N = P(0)·Π P̄(x_i|0)`; the upper bound is symmetric. A zero lower
    /// numerator gives 0, a zero-over-zero upper bound gives 1, and a label
    /// missing one class gives the vacuous interval.
    pub fn marginal_interval(&self, x: &[usize], j: usize) -> Result<ProbabilityInterval> {
        let table = self.table(j)?;
        if x.len() != self.arity.len() {
            return Err(Error::DimensionMismatch { expected: self.arity.len(), found: x.len() });
        }
        if !self.is_supported(j) {
            return Ok(ProbabilityInterval::vacuous());
        }
        let [n0, n1] = table.class_counts;
        let total = (n0 + n1) as f64;
        let (log_prior0, log_prior1) = ((n0 as f64 / total).ln(), (n1 as f64 / total).ln());
        let (lo0, up0) = table.log_bounds(x, 0, self.s);
        let (lo1, up1) = table.log_bounds(x, 1, self.s);
        let lower = ratio(log_prior1 + lo1, log_prior0 + up0).unwrap_or(0.0);
        let upper = ratio(log_prior1 + up1, log_prior0 + lo0).unwrap_or(1.0);
        ProbabilityInterval::new(lower, upper.max(lower))
    }

    pub fn marginal_intervals(&self, x: &[usize]) -> Result<MarginalIntervalModel> {
        (0..self.m()).map(|j| self.marginal_interval(x, j)).collect::<Result<Vec<_>>>().map(MarginalIntervalModel::new)
    }

    /// Naive Bayes posterior `P(Y_j = 1 | x)` from the same counts, ignoring `s`.
    ///
    /// Falls back to the empirical prior when no class gives `x` positive
    /// likelihood and to 1/2 when label `j` misses a class.
    pub fn posterior(&self, x: &[usize], j: usize) -> Result<f64> {
        let table = self.table(j)?;
        if x.len() != self.arity.len() {
            return Err(Error::DimensionMismatch { expected: self.arity.len(), found: x.len() });
        }
        if !self.is_supported(j) {
            return Ok(0.5);
        }
        let [n0, n1] = table.class_counts;
        let total = (n0 + n1) as f64;
        let (l0, _) = table.log_bounds(x, 0, 0.0);
        let (l1, _) = table.log_bounds(x, 1, 0.0);
        let prior1 = n1 as f64 / total;
        Ok(ratio(prior1.ln() + l1, (n0 as f64 / total).ln() + l0).unwrap_or(prior1))
    }

    pub fn posteriors(&self, x: &[usize]) -> Result<Vec<f64>> {
        (0..self.m()).map(|j| self.posterior(x, j)).collect()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, serde_json::to_string_pretty(self)?).map_err(|e| Error::io(path, e))
    }

    fn table(&self, j: usize) -> Result<&LabelTable> {
        self.labels.get(j).ok_or(Error::IndexOutOfRange { index: j, m: self.labels.len() })
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "s", value: s, reason: "must be finite and non-negative" })
    }
}
