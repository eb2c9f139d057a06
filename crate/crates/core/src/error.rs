use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by model construction, inference guards and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid probability interval [{lower}, {upper}]")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("label count {0} is out of range (1..={1})")]
    LabelCount(usize, usize),

    #[error("enumeration too large: m = {m} exceeds the limit of {max} labels for {what}")]
    EnumerationTooLarge { what: &'static str, m: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("label index {index} out of range for m = {m}")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("tree has {found} nodes, expected {expected} for depth {m}")]
    TreeShape { m: usize, expected: usize, found: usize },

    #[error("operation requires degenerate (precise) intervals, node {node} is [{lower}, {upper}]")]
    NotDegenerate { node: usize, lower: f64, upper: f64 },

    #[error("distribution {index} is not a probability vector: {reason}")]
    InvalidDistribution { index: usize, reason: String },

    #[error("outer approximation does not contain the exact set ({approx} vs {exact} elements)")]
    ContainmentViolated { approx: usize, exact: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    #[error("dataset row {row}: {message}")]
    Dataset { row: usize, message: String },

    #[error("label {label:?} has insufficient class support: {message}")]
    InsufficientSupport { label: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
