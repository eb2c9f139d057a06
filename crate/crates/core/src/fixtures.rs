//! Small worked models used by the golden examples, the tests and the runnable examples.
//!
//! The same trees ship as JSON files under `fixtures/` in the crate root.

use crate::br::MarginalIntervalModel;
use crate::decision::FiniteCredalSet;
use crate::interval::ProbabilityInterval;
use crate::tree::ImpreciseBinaryTree;

fn iv(lower: f64, upper: f64) -> ProbabilityInterval {
    ProbabilityInterval::new(lower, upper).expect("fixture interval")
}

/// Precise two-label tree: `P(Y1=1) = 0.5`, `P(Y2=1 | Y1=0) = 0.2`, `P(Y2=1 | Y1=1) = 0.7`.
pub fn precise_chain_tree() -> ImpreciseBinaryTree {
    ImpreciseBinaryTree::precise(2, &[0.5, 0.2, 0.7]).expect("fixture tree")
}

/// Imprecise two-label tree whose maximal set under Hamming loss is `{00, 10, 11}`.
pub fn outer_gap_tree() -> ImpreciseBinaryTree {
    ImpreciseBinaryTree::new(2, vec![iv(0.456, 0.556), iv(0.138, 0.238), iv(0.613, 0.713)]).expect("fixture tree")
}

/// Imprecise two-label tree used for the backward recursion walk-through.
pub fn recursion_tree() -> ImpreciseBinaryTree {
    ImpreciseBinaryTree::new(2, vec![iv(0.45, 0.70), iv(0.85, 0.97), iv(0.35, 0.90)]).expect("fixture tree")
}

/// Four joint distributions over `{00, 01, 10, 11}`.
pub fn four_point_credal_set() -> FiniteCredalSet {
    FiniteCredalSet::new(
        2,
        vec![
            vec![0.4, 0.3, 0.1, 0.2],
            vec![0.4, 0.3, 0.0, 0.3],
            vec![0.3, 0.1, 0.1, 0.5],
            vec![0.1, 0.2, 0.4, 0.3],
        ],
    )
    .expect("fixture credal set")
}

/// `P(Y1=1) ∈ [0.6, 1]`, `P(Y2=1) ∈ [0, 1]`.
pub fn interval_dominance_model() -> MarginalIntervalModel {
    MarginalIntervalModel::new(vec![iv(0.6, 1.0), iv(0.0, 1.0)])
}
