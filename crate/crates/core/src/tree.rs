//! Imprecise probabilistic binary trees over a label chain.
//!
//! A tree of depth `m` has `2^m − 1` internal nodes stored breadth-first.
//! Node `k` holds the interval for `P(Y_{d+1} = 1 | path to k)`, where `d` is
//! the depth of `k`; its branch-0 child is `2k + 1` and its branch-1 child is
//! `2k + 2`. Leaves are the vectors of `{0,1}^m`, indexed by their mask (first
//! label most significant), so a [`CostVector`] is indexed the same way.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::ProbabilityInterval;
use crate::vector::{check_enumerable, label_bit, BinaryVector, MAX_LABELS};

/// Deepest tree accepted by [`ImpreciseBinaryTree::new`]; leaf arrays stay below 2^20 entries.
pub const MAX_TREE_DEPTH: usize = 20;

/// Depth limit of [`extreme_point_oracle`] (`2^(2^m − 1)` endpoint combinations).
pub const ORACLE_MAX_DEPTH: usize = 4;

/// Real-valued function on `{0,1}^m`, indexed by vector mask.
#[derive(Clone, Debug, PartialEq)]
pub struct CostVector {
    m: usize,
    costs: Vec<f64>,
}

impl CostVector {
    pub fn new(m: usize, costs: Vec<f64>) -> Result<Self> {
        if m == 0 || m > MAX_TREE_DEPTH {
            return Err(Error::LabelCount(m, MAX_TREE_DEPTH));
        }
        if costs.len() != 1 << m {
            return Err(Error::DimensionMismatch { expected: 1 << m, found: costs.len() });
        }
        if let Some(bad) = costs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter { name: "cost", value: *bad, reason: "must be finite" });
        }
        Ok(Self { m, costs })
    }

    /// Evaluates `f` on every vector of `{0,1}^m`.
    pub fn from_fn(m: usize, mut f: impl FnMut(BinaryVector) -> f64) -> Result<Self> {
        if m == 0 || m > MAX_TREE_DEPTH {
            return Err(Error::LabelCount(m, MAX_TREE_DEPTH));
        }
        let costs = (0..1u32 << m).map(|b| f(BinaryVector::from_raw(m, b))).collect();
        Self::new(m, costs)
    }

    pub fn constant(m: usize, value: f64) -> Result<Self> {
        Self::new(m, vec![value; 1 << m])
    }

    /// Indicator of `Y_i = 1` (0-based `i`).
    pub fn indicator(m: usize, i: usize) -> Result<Self> {
        if i >= m {
            return Err(Error::IndexOutOfRange { index: i, m });
        }
        Self::from_fn(m, |y| if y.get(i) { 1.0 } else { 0.0 })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.costs
    }

    pub fn get(&self, y: &BinaryVector) -> f64 {
        self.costs[y.bits() as usize]
    }

    pub fn negate(&self) -> Self {
        Self { m: self.m, costs: self.costs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: other.m });
        }
        Ok(Self { m: self.m, costs: self.costs.iter().zip(&other.costs).map(|(a, b)| a + b).collect() })
    }
}

/// Credal set over `{0,1}^m` given by one probability interval per internal node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TreeFile", into = "TreeFile")]
pub struct ImpreciseBinaryTree {
    m: usize,
    nodes: Vec<ProbabilityInterval>,
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    m: usize,
    nodes: Vec<ProbabilityInterval>,
}

impl TryFrom<TreeFile> for ImpreciseBinaryTree {
    type Error = Error;

    fn try_from(file: TreeFile) -> Result<Self> {
        Self::new(file.m, file.nodes)
    }
}

impl From<ImpreciseBinaryTree> for TreeFile {
    fn from(tree: ImpreciseBinaryTree) -> Self {
        TreeFile { m: tree.m, nodes: tree.nodes }
    }
}

impl ImpreciseBinaryTree {
    pub fn new(m: usize, nodes: Vec<ProbabilityInterval>) -> Result<Self> {
        if m == 0 || m > MAX_TREE_DEPTH.min(MAX_LABELS) {
            return Err(Error::LabelCount(m, MAX_TREE_DEPTH));
        }
        let expected = (1usize << m) - 1;
        if nodes.len() != expected {
            return Err(Error::TreeShape { m, expected, found: nodes.len() });
        }
        Ok(Self { m, nodes })
    }

    /// Precise tree from one probability per node.
    pub fn precise(m: usize, probabilities: &[f64]) -> Result<Self> {
        let nodes = probabilities.iter().map(|&p| ProbabilityInterval::precise(p)).collect::<Result<Vec<_>>>()?;
        Self::new(m, nodes)
    }

    /// Tree whose every node at depth `i` carries `marginals[i]`.
    ///
    /// Its lower expectations of additive costs coincide with those of the
    /// binary-relevance credal set built from the same marginals.
    pub fn from_marginals(marginals: &[ProbabilityInterval]) -> Result<Self> {
        let m = marginals.len();
        if m == 0 || m > MAX_TREE_DEPTH {
            return Err(Error::LabelCount(m, MAX_TREE_DEPTH));
        }
        let nodes = (0..m).flat_map(|d| std::iter::repeat_n(marginals[d], 1 << d)).collect();
        Self::new(m, nodes)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> &[ProbabilityInterval] {
        &self.nodes
    }

    /// Interval at the node reached by the first `depth` labels of `prefix`.
    ///
    /// `prefix` holds those labels as an integer, first label most significant.
    pub fn node(&self, depth: usize, prefix: usize) -> &ProbabilityInterval {
        &self.nodes[(1 << depth) - 1 + prefix]
    }

    pub fn is_degenerate(&self) -> bool {
        self.nodes.iter().all(ProbabilityInterval::is_degenerate)
    }

    /// Lower expectation of `cost`, computed leaf-to-root by iterated local lower expectations.
    pub fn lower_expectation(&self, cost: &CostVector) -> f64 {
        assert_eq!(cost.m, self.m, "cost vector and tree have different label counts");
        let mut values = cost.costs.clone();
        for depth in (0..self.m).rev() {
            let width = 1usize << depth;
            let base = width - 1;
            for prefix in 0..width {
                let on_zero = values[2 * prefix];
                let on_one = values[2 * prefix + 1];
                values[prefix] = self.nodes[base + prefix].lower_mix(on_zero, on_one);
            }
            values.truncate(width);
        }
        values[0]
    }

    /// Upper expectation, `−E̲[−cost]`.
    pub fn upper_expectation(&self, cost: &CostVector) -> f64 {
        -self.lower_expectation(&cost.negate())
    }

    /// Bounds on `P(Y_i = 1)` (0-based `i`).
    pub fn marginal_interval(&self, i: usize) -> Result<ProbabilityInterval> {
        let indicator = CostVector::indicator(self.m, i)?;
        let lower = self.lower_expectation(&indicator).clamp(0.0, 1.0);
        let upper = self.upper_expectation(&indicator).clamp(0.0, 1.0);
        ProbabilityInterval::new(lower, upper.max(lower))
    }

    pub fn marginal_intervals(&self) -> Vec<ProbabilityInterval> {
        (0..self.m).map(|i| self.marginal_interval(i).expect("index in range")).collect()
    }

    /// Probability of `y` under a precise tree: the product of branch probabilities on its path.
    pub fn joint_probability(&self, y: &BinaryVector) -> Result<f64> {
        if y.m() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: y.m() });
        }
        if let Some((node, iv)) = self.nodes.iter().enumerate().find(|(_, iv)| !iv.is_degenerate()) {
            return Err(Error::NotDegenerate { node, lower: iv.lower(), upper: iv.upper() });
        }
        let mut p = 1.0;
        let mut prefix = 0usize;
        for depth in 0..self.m {
            let one = self.node(depth, prefix).lower();
            let bit = y.bits() & label_bit(self.m, depth) != 0;
            p *= if bit { one } else { 1.0 - one };
            prefix = 2 * prefix + bit as usize;
        }
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Free-function form of [`ImpreciseBinaryTree::lower_expectation`].
pub fn lower_expectation(tree: &ImpreciseBinaryTree, cost: &CostVector) -> f64 {
    tree.lower_expectation(cost)
}

/// Free-function form of [`ImpreciseBinaryTree::upper_expectation`].
pub fn upper_expectation(tree: &ImpreciseBinaryTree, cost: &CostVector) -> f64 {
    tree.upper_expectation(cost)
}

/// Random tree: each node draws `θ ~ U[0, 1]` (breadth-first order) and gets `[max(0, θ−ε), min(θ+ε, 1)]`.
///
/// The generator consumes exactly one uniform per node, so two calls on
/// identically seeded generators with different `epsilon` produce nested trees.
pub fn generate_tree<R: Rng + ?Sized>(m: usize, epsilon: f64, rng: &mut R) -> Result<ImpreciseBinaryTree> {
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon, reason: "must lie in [0, 0.5]" });
    }
    if m == 0 || m > MAX_TREE_DEPTH {
        return Err(Error::LabelCount(m, MAX_TREE_DEPTH));
    }
    let nodes = (0..(1usize << m) - 1)
        .map(|_| ProbabilityInterval::around(rng.gen::<f64>(), epsilon))
        .collect::<Result<Vec<_>>>()?;
    ImpreciseBinaryTree::new(m, nodes)
}

/// Minimum precise expectation of `cost` over every choice of interval endpoint at every node.
///
/// Brute force over `2^(2^m − 1)` precise trees; only for `m ≤ 4`.
pub fn extreme_point_oracle(tree: &ImpreciseBinaryTree, cost: &CostVector) -> Result<f64> {
    check_enumerable("extreme point oracle", tree.m, ORACLE_MAX_DEPTH)?;
    if cost.m != tree.m {
        return Err(Error::DimensionMismatch { expected: tree.m, found: cost.m });
    }
    let m = tree.m;
    let n_nodes = (1usize << m) - 1;
    let mut best = f64::INFINITY;
    for choice in 0u64..1 << n_nodes {
        let prob_one = |node: usize| {
            let iv = &tree.nodes[node];
            if choice >> node & 1 == 1 {
                iv.upper()
            } else {
                iv.lower()
            }
        };
        let mut expectation = 0.0;
        for leaf in 0..1usize << m {
            let mut p = 1.0;
            let mut node = 0usize;
            for depth in 0..m {
                let bit = leaf >> (m - 1 - depth) & 1;
                let p1 = prob_one(node);
                p *= if bit == 1 { p1 } else { 1.0 - p1 };
                node = 2 * node + 1 + bit;
            }
            expectation += p * cost.costs[leaf];
        }
        best = best.min(expectation);
    }
    Ok(best)
}
