//! Skeptical multi-label prediction under sets of probability distributions.
//!
//! A credal set over label vectors `{0,1}^m` is queried only through lower
//! expectations. On top of that the crate builds:
//!
//! * [`tree`]: imprecise probabilistic binary trees over a label chain, with
//!   exact lower expectations by backward recursion and a brute-force
//!   extreme-point oracle;
//! * [`decision`]: exact maximality under Hamming loss in `3^m − 1` lower
//!   expectations, the pairwise reference, finite-set E-admissibility and the
//!   marginal outer approximation;
//! * [`br`]: closed forms for binary-relevance (independent marginal) models,
//!   plus interval dominance and Γ-minimax / Γ-minimin;
//! * [`ncc`]: a naive credal classifier producing per-label probability intervals;
//! * [`baselines`]: rejection and partial-abstention predictors on precise marginals;
//! * [`eval`] and [`harness`]: metrics, corruption, splitting and the experiment drivers.
//!
//! ```
//! use skeptic::decision::maximal_set_subsets;
//! use skeptic::fixtures;
//!
//! let tree = fixtures::outer_gap_tree();
//! let outcome = maximal_set_subsets(&tree).unwrap();
//! assert_eq!(outcome.set.to_string(), "{00, 10, 11}");
//! assert_eq!(outcome.checks, 8);
//! ```

pub mod baselines;
pub mod br;
pub mod decision;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod harness;
pub mod interval;
pub mod ncc;
pub mod seed;
pub mod tree;
pub mod vector;

pub use br::MarginalIntervalModel;
pub use decision::{CredalOracle, FiniteCredalSet, LossMatrix};
pub use error::{Error, Result};
pub use interval::ProbabilityInterval;
pub use tree::{CostVector, ImpreciseBinaryTree};
pub use vector::{Assignment, BinaryVector, PartialVector, PredictionSet};
