//! Experiment drivers: exact-vs-outer simulation, the naive-vs-Algorithm-1
//! timing trend, the worked-example golden report and the dataset pipelines.
//!
//! Every randomized step draws from a generator derived from the configured
//! seed and the work unit's coordinates, so results do not depend on thread
//! scheduling. Parallel work is collected in input order.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{abstain_par, abstain_sep, reject_predict, PreciseMarginals};
use crate::br::{br_skeptical_prediction, gamma_minimax, interval_dominance_set};
use crate::decision::{
    check_counts, dominance_value, eadmissible_set_finite, maximal_set_subsets, maximal_set_naive, outer_partial_vector,
    precise_bayes_hamming, LossMatrix, NAIVE_MAX_LABELS,
};
use crate::error::{Error, Result};
use crate::eval::{
    bin_distances, corrupt, cross_validation, downsample_split, set_distance, write_metrics_csv, CorruptionKind,
    CorruptionSpec, MetricsRecord, MetricsRow, Split,
};
use crate::fixtures;
use crate::ncc::{NccModel, RawDataset};
use crate::seed;
use crate::tree::{generate_tree, CostVector, ImpreciseBinaryTree};
use crate::vector::{Assignment, BinaryVector, PartialVector, PredictionSet};

/// Label of the confidence-interval construction, written into every JSON summary.
pub const CI_METHOD: &str = "normal approximation: mean ± 1.96·sd/√reps (sample sd over repetitions)";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    #[default]
    Simulation,
    Timing,
    Dataset,
}

/// How a dataset run produces train/test pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Repeated k-fold cross-validation; `levels` are corruption percentages of the training labels.
    #[default]
    CrossValidation,
    /// Random train/test splits; `levels` are training percentages.
    Downsampling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Skeptic,
    Reject,
    AbstainSep,
    AbstainPar,
    Precise,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Skeptic => "skeptic",
            Method::Reject => "reject",
            Method::AbstainSep => "abstain-sep",
            Method::AbstainPar => "abstain-par",
            Method::Precise => "precise",
        }
    }
}

/// Every knob of the three experiment families, with desk-scale defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    /// Label counts for the simulation and timing studies.
    pub m: Vec<usize>,
    pub epsilon: Vec<f64>,
    pub trees_per_cell: usize,
    pub repetitions: usize,
    /// Trees per label count in the timing study.
    pub timing_instances: usize,
    pub timing_epsilon: f64,
    /// Wall time each timing arm accumulates before its mean is taken.
    pub timing_min_millis: u64,
    pub dataset: Option<PathBuf>,
    pub dataset_name: Option<String>,
    pub protocol: Protocol,
    pub corruption: CorruptionKind,
    pub per_column: bool,
    pub levels: Vec<f64>,
    pub cv_shuffles: usize,
    pub cv_folds: usize,
    pub downsample_repeats: usize,
    /// Equal-width bins per feature.
    pub bins: usize,
    pub methods: Vec<Method>,
    pub s: Vec<f64>,
    pub gamma: Vec<f64>,
    pub c_sep: Vec<f64>,
    pub c_par: Vec<f64>,
    pub parallel: bool,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Simulation,
            seed: 20_240_901,
            m: vec![2, 3, 4, 5, 6],
            epsilon: vec![0.05, 0.15, 0.25, 0.35, 0.45],
            trees_per_cell: 200,
            repetitions: 3,
            timing_instances: 20,
            timing_epsilon: 0.25,
            timing_min_millis: 40,
            dataset: None,
            dataset_name: None,
            protocol: Protocol::CrossValidation,
            corruption: CorruptionKind::Missing,
            per_column: false,
            levels: vec![0.0, 20.0, 40.0, 60.0, 80.0],
            cv_shuffles: 10,
            cv_folds: 10,
            downsample_repeats: crate::eval::DOWNSAMPLE_REPEATS,
            bins: 6,
            methods: vec![Method::Skeptic, Method::Reject, Method::AbstainSep, Method::AbstainPar, Method::Precise],
            s: vec![0.0, 1.0, 2.0, 4.0, 8.0],
            gamma: vec![0.0, 0.1, 0.2, 0.3, 0.4],
            c_sep: vec![0.05, 0.15, 0.25, 0.35, 0.45],
            c_par: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            parallel: true,
            output: None,
        }
    }
}

impl ExperimentConfig {
    /// 2000 trees per cell, five repetitions.
    pub fn full_scale(mut self) -> Self {
        self.trees_per_cell = 2000;
        self.repetitions = 5;
        self
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

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value: f64, reason| Err(Error::InvalidParameter { name, value, reason });
        if let Some(&e) = self.epsilon.iter().find(|e| !(0.0..=0.5).contains(*e)) {
            return bad("epsilon", e, "must lie in [0, 0.5]");
        }
        if let Some(&g) = self.gamma.iter().find(|g| !(0.0..0.5).contains(*g)) {
            return bad("gamma", g, "must lie in [0, 0.5)");
        }
        if let Some(&c) = self.c_sep.iter().chain(&self.c_par).find(|c| !(c.is_finite() && **c > 0.0)) {
            return bad("c", c, "penalty must be positive");
        }
        if let Some(&s) = self.s.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return bad("s", s, "must be finite and non-negative");
        }
        if self.repetitions == 0 || self.trees_per_cell == 0 {
            return bad("repetitions", self.repetitions.min(self.trees_per_cell) as f64, "must be positive");
        }
        Ok(())
    }

    fn output_dir(&self) -> Option<&Path> {
        self.output.as_deref()
    }
}

/// Named pass/fail check over a run's results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Audit {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_owned(), passed, detail: detail.into() }
    }
}

/// Mean and normal-approximation half-width of `values`.
pub fn mean_half_width(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * var.sqrt() / n.sqrt())
}

fn map_units<T: Send, U: Sync>(parallel: bool, units: &[U], f: impl Fn(&U) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    if parallel {
        units.par_iter().map(&f).collect()
    } else {
        units.iter().map(f).collect()
    }
}

fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

// ---------------------------------------------------------------- simulation

/// Bin percentages of one repetition of one `(m, ε)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub m: usize,
    pub epsilon: f64,
    pub repetition: usize,
    pub trees: usize,
    pub q0: f64,
    pub q25: f64,
    pub q50: f64,
    pub q100: f64,
    pub mean_distance: f64,
    pub max_distance: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub m: usize,
    pub epsilon: f64,
    pub repetitions: usize,
    pub q0: f64,
    pub q0_half_width: f64,
    pub q25: f64,
    pub q25_half_width: f64,
    pub q50: f64,
    pub q50_half_width: f64,
    pub q100: f64,
    pub q100_half_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub ci_method: String,
    pub trees_per_cell: usize,
    pub seed: u64,
    pub rows: Vec<SimulationRow>,
    pub summary: Vec<SimulationSummary>,
    pub audits: Vec<Audit>,
}

impl SimulationReport {
    pub fn cell(&self, m: usize, epsilon: f64) -> Option<&SimulationSummary> {
        self.summary.iter().find(|s| s.m == m && (s.epsilon - epsilon).abs() < 1e-12)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        create_dir(dir)?;
        write_csv(&self.rows, &dir.join("simulation.csv"))?;
        write_csv(&self.summary, &dir.join("simulation_summary.csv"))?;
        write_json(self, &dir.join("simulation_summary.json"))
    }
}

/// Distances `|outer| − |exact|` for `trees` random trees.
///
/// A tree whose outer approximation misses a maximal vector aborts the run.
pub fn simulate_cell<R: rand::Rng + ?Sized>(m: usize, epsilon: f64, trees: usize, rng: &mut R) -> Result<Vec<u64>> {
    (0..trees)
        .map(|_| {
            let tree = generate_tree(m, epsilon, rng)?;
            let exact = maximal_set_subsets(&tree)?.set;
            let outer = outer_partial_vector(&tree.marginal_intervals())?;
            set_distance(&outer, &exact)
        })
        .collect()
}

/// Table-2 style study over every `(m, ε)` pair of the configuration.
pub fn run_simulation(cfg: &ExperimentConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let units: Vec<(usize, usize, usize)> = cfg
        .m
        .iter()
        .flat_map(|&m| (0..cfg.epsilon.len()).flat_map(move |e| (0..cfg.repetitions).map(move |r| (m, e, r))))
        .collect();
    let rows = map_units(cfg.parallel, &units, |&(m, e, r)| {
        let epsilon = cfg.epsilon[e];
        let mut rng = seed::sub_rng(cfg.seed, &[m as u64, e as u64, r as u64]);
        let ds = simulate_cell(m, epsilon, cfg.trees_per_cell, &mut rng)?;
        let bins = bin_distances(&ds, m);
        Ok(SimulationRow {
            m,
            epsilon,
            repetition: r,
            trees: ds.len(),
            q0: bins.q0,
            q25: bins.q25,
            q50: bins.q50,
            q100: bins.q100,
            mean_distance: ds.iter().sum::<u64>() as f64 / ds.len() as f64,
            max_distance: ds.iter().copied().max().unwrap_or(0),
        })
    })?;
    let summary = rows
        .chunks(cfg.repetitions)
        .map(|reps| {
            let stat = |f: fn(&SimulationRow) -> f64| mean_half_width(&reps.iter().map(f).collect::<Vec<_>>());
            let (q0, q0_half_width) = stat(|r| r.q0);
            let (q25, q25_half_width) = stat(|r| r.q25);
            let (q50, q50_half_width) = stat(|r| r.q50);
            let (q100, q100_half_width) = stat(|r| r.q100);
            SimulationSummary {
                m: reps[0].m,
                epsilon: reps[0].epsilon,
                repetitions: reps.len(),
                q0,
                q0_half_width,
                q25,
                q25_half_width,
                q50,
                q50_half_width,
                q100,
                q100_half_width,
            }
        })
        .collect();
    let trials = rows.iter().map(|r| r.trees).sum::<usize>();
    let audits = vec![Audit::new("outer approximation contains the maximal set", true, format!("{trials} trees checked"))];
    let report = SimulationReport {
        ci_method: CI_METHOD.to_owned(),
        trees_per_cell: cfg.trees_per_cell,
        seed: cfg.seed,
        rows,
        summary,
        audits,
    };
    if let Some(dir) = cfg.output_dir() {
        report.write(dir)?;
    }
    Ok(report)
}

// -------------------------------------------------------------------- timing

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub m: usize,
    pub instances: usize,
    pub naive_checks: u128,
    pub subset_checks: u128,
    pub naive_mean_seconds: f64,
    pub subset_mean_seconds: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
    /// Whether the naive/Algorithm-1 time ratio increases strictly with `m`.
    pub ratio_strictly_increasing: bool,
    pub audits: Vec<Audit>,
}

impl TimingReport {
    pub fn write(&self, dir: &Path) -> Result<()> {
        create_dir(dir)?;
        write_csv(&self.rows, &dir.join("timing.csv"))?;
        write_json(self, &dir.join("timing_summary.json"))
    }
}

/// Mean seconds per call of `f` over `trees`, repeating whole passes until `min` has elapsed.
fn time_per_instance(trees: &[ImpreciseBinaryTree], min: Duration, mut f: impl FnMut(&ImpreciseBinaryTree)) -> f64 {
    let start = Instant::now();
    let mut calls = 0usize;
    loop {
        for tree in trees {
            f(tree);
        }
        calls += trees.len();
        let elapsed = start.elapsed();
        if elapsed >= min {
            return elapsed.as_secs_f64() / calls as f64;
        }
    }
}

/// Mean decision time of the pairwise rule and of the subset rule, single-threaded.
pub fn run_timing(cfg: &ExperimentConfig) -> Result<TimingReport> {
    let min = Duration::from_millis(cfg.timing_min_millis);
    let mut rows = Vec::new();
    let mut agree = true;
    let mut counts_ok = true;
    for &m in &cfg.m {
        if m > NAIVE_MAX_LABELS {
            return Err(Error::EnumerationTooLarge { what: "timing study", m, max: NAIVE_MAX_LABELS });
        }
        let mut rng = seed::sub_rng(cfg.seed, &[m as u64, u64::MAX]);
        let trees = (0..cfg.timing_instances.max(1))
            .map(|_| generate_tree(m, cfg.timing_epsilon, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let loss = LossMatrix::hamming(m)?;
        let (naive_expected, subset_expected) = check_counts(m as u32);
        for tree in &trees {
            let a = maximal_set_subsets(tree)?;
            let n = maximal_set_naive(tree, &loss)?;
            agree &= a.set == n.set;
            counts_ok &= a.checks as u128 == subset_expected && n.checks as u128 == naive_expected;
        }
        // Alternate arms so slow drift in machine load affects both.
        let mut naive = 0.0;
        let mut subset = 0.0;
        for _ in 0..2 {
            naive += time_per_instance(&trees, min / 2, |t| {
                std::hint::black_box(maximal_set_naive(t, &loss).expect("checked above"));
            });
            subset += time_per_instance(&trees, min / 2, |t| {
                std::hint::black_box(maximal_set_subsets(t).expect("checked above"));
            });
        }
        rows.push(TimingRow {
            m,
            instances: trees.len(),
            naive_checks: naive_expected,
            subset_checks: subset_expected,
            naive_mean_seconds: naive / 2.0,
            subset_mean_seconds: subset / 2.0,
            ratio: naive / subset,
        });
    }
    let ratio_strictly_increasing = rows.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let audits = vec![
        Audit::new("naive and the subset rule return the same set", agree, "every timed tree"),
        Audit::new("check counts equal 2^m(2^m-1) and 3^m-1", counts_ok, "every timed tree"),
    ];
    let report = TimingReport { rows, ratio_strictly_increasing, audits };
    if let Some(dir) = cfg.output_dir() {
        report.write(dir)?;
    }
    Ok(report)
}

// ------------------------------------------------------------ golden report

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub checks: Vec<GoldenCheck>,
}

impl GoldenReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {}: expected {}, got {}", c.name, c.expected, c.actual)?;
        }
        Ok(())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn check(name: &str, expected: impl Into<String>, actual: impl Into<String>, passed: bool) -> GoldenCheck {
    GoldenCheck { name: name.to_owned(), expected: expected.into(), actual: actual.into(), passed }
}

/// Re-runs every worked example and compares with reference values.
///
/// Reference values are compared at the precision they are printed with.
pub fn run_worked_examples() -> Result<GoldenReport> {
    let mut checks = Vec::new();

    let chain = fixtures::precise_chain_tree();
    let p = chain.marginal_interval(1)?;
    checks.push(check("precise chain: P(Y2 = 1)", "0.45", format!("[{:.12}, {:.12}]", p.lower(), p.upper()), close(p.lower(), 0.45, 1e-12) && p.is_degenerate()));

    let diff = CostVector::new(2, vec![0.0, -1.0, 1.0, 0.0])?;
    let d = chain.lower_expectation(&diff);
    checks.push(check("precise chain: E[l(01) - l(10)]", "0.05 > 0, so 10 is preferred", format!("{d:.12}"), close(d, 0.05, 1e-9)));

    let gap = fixtures::outer_gap_tree();
    let reference = [("1*", 0.444), ("0*", 0.456), ("*1", 0.498), ("*0", 0.354), ("11", 0.942), ("10", 0.846), ("01", 1.001), ("00", 0.810)];
    for (b, value) in reference {
        let a: Assignment = b.parse::<PartialVector>().map(|v| Assignment::from_masks(2, v.known_mask(), v.value_mask()))??;
        let got = dominance_value(&gap, &a.complement())?;
        checks.push(check(&format!("outer-gap tree: lower expected Hamming loss of {b}"), format!("{value:.3}"), format!("{got:.6}"), close(got, value, 1e-3)));
    }
    let outcome = maximal_set_subsets(&gap)?;
    checks.push(check("outer-gap tree: maximal set", "{00, 10, 11}", outcome.set.to_string(), outcome.set.to_string() == "{00, 10, 11}"));
    checks.push(check("outer-gap tree: dominance checks", "8", outcome.checks.to_string(), outcome.checks == 8));
    let outer = outer_partial_vector(&gap.marginal_intervals())?;
    checks.push(check("outer-gap tree: outer approximation", "**", outer.to_string(), outer.to_string() == "**"));

    let rec = fixtures::recursion_tree();
    let xor = CostVector::new(2, vec![0.0, 1.0, 1.0, 0.0])?;
    let v = rec.lower_expectation(&xor);
    checks.push(check("recursion tree: XOR lower expectation (2 decimals)", "0.33", format!("{v:.6}"), close(v, 0.33, 0.005 + 1e-9)));

    let credal = fixtures::four_point_credal_set();
    let zo = LossMatrix::zero_one(2)?;
    let e = eadmissible_set_finite(&credal, &zo)?;
    checks.push(check("four-point credal set: E-admissible set", "{00, 10, 11}", e.to_string(), e.to_string() == "{00, 10, 11}"));
    let mx = maximal_set_naive(&credal, &zo)?.set;
    checks.push(check("four-point credal set: maximal set", "{00, 01, 10, 11}", mx.to_string(), mx.to_string() == "{00, 01, 10, 11}"));
    let reference: BinaryVector = "00".parse()?;
    let row: Vec<f64> = ["01", "10", "11"]
        .iter()
        .map(|y| y.parse::<BinaryVector>().map(|y| crate::decision::CredalOracle::lower_expectation(&credal, &zo.difference(&y, &reference))))
        .collect::<Result<_>>()?;
    let ok = row.iter().zip([-0.1, -0.3, -0.2]).all(|(a, b)| close(*a, b, 1e-9));
    checks.push(check("four-point credal set: lower differences against 00", "[-0.1, -0.3, -0.2]", format!("{row:?}"), ok));

    let md = fixtures::interval_dominance_model();
    let id = interval_dominance_set(&md)?.to_partial_vector().map_or("not a partial vector".to_owned(), |v| v.to_string());
    checks.push(check("marginals [0.6, 1] x [0, 1]: interval dominance", "**", id.clone(), id == "**"));
    let skeptic = br_skeptical_prediction(&md)?;
    checks.push(check("marginals [0.6, 1] x [0, 1]: maximality and E-admissibility", "1*", skeptic.to_string(), skeptic.to_string() == "1*"));
    let bounds: Vec<(f64, f64)> = ["11", "10", "01", "00"].iter().map(|y| y.parse().map(|y| md.hamming_bounds(&y))).collect::<Result<_>>()?;
    let want = [(0.0, 1.4), (0.0, 1.4), (0.6, 2.0), (0.6, 2.0)];
    let ok = bounds.iter().zip(want).all(|(a, b)| close(a.0, b.0, 1e-12) && close(a.1, b.1, 1e-12));
    checks.push(check("marginals [0.6, 1] x [0, 1]: expectation bounds of 11, 10, 01, 00", format!("{want:?}"), format!("{bounds:?}"), ok));
    let minimax = gamma_minimax(&md)?;
    checks.push(check("marginals [0.6, 1] x [0, 1]: gamma-minimax", "1*", minimax.to_string(), minimax.to_string() == "1*"));

    Ok(GoldenReport { checks })
}

// ------------------------------------------------------------------ datasets

/// Mean IC and CP over trials for one `(method, hyper-parameter, level)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub dataset: String,
    pub method: String,
    pub hyperparameter: f64,
    pub level: f64,
    pub trials: usize,
    #[serde(rename = "IC")]
    pub ic: f64,
    #[serde(rename = "IC_half_width")]
    pub ic_half_width: f64,
    #[serde(rename = "CP")]
    pub cp: f64,
    #[serde(rename = "CP_half_width")]
    pub cp_half_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub ci_method: String,
    pub protocol: Protocol,
    pub rows: Vec<MetricsRow>,
    pub summary: Vec<MetricsSummary>,
    pub audits: Vec<Audit>,
}

impl DatasetReport {
    pub fn metrics_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        write_metrics_csv(&self.rows, &mut out)?;
        Ok(String::from_utf8(out).expect("csv output is utf-8"))
    }

    pub fn find(&self, method: Method, hyperparameter: f64, level: f64) -> Option<&MetricsSummary> {
        self.summary.iter().find(|s| {
            s.method == method.name() && (s.hyperparameter - hyperparameter).abs() < 1e-12 && (s.level - level).abs() < 1e-12
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        create_dir(dir)?;
        let path = dir.join("metrics.csv");
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_metrics_csv(&self.rows, file)?;
        write_csv(&self.summary, &dir.join("metrics_summary.csv"))?;
        write_json(self, &dir.join("dataset_summary.json"))
    }
}

/// Groups rows by `(method, hyper-parameter, level)` in first-seen order.
pub fn summarize(rows: &[MetricsRow]) -> Vec<MetricsSummary> {
    let mut keys: Vec<(String, f64, f64, String)> = Vec::new();
    for r in rows {
        let key = (r.method.clone(), r.hyperparameter, r.level, r.dataset.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(method, hyperparameter, level, dataset)| {
            let group: Vec<&MetricsRow> =
                rows.iter().filter(|r| r.method == method && r.hyperparameter == hyperparameter && r.level == level).collect();
            let (ic, ic_half_width) = mean_half_width(&group.iter().map(|r| r.ic).collect::<Vec<_>>());
            let (cp, cp_half_width) = mean_half_width(&group.iter().map(|r| r.cp).collect::<Vec<_>>());
            MetricsSummary { dataset, method, hyperparameter, level, trials: group.len(), ic, ic_half_width, cp, cp_half_width }
        })
        .collect()
}

/// Predictions of one method at one hyper-parameter for a test row.
fn predict(method: Method, hyper: f64, model: &NccModel, x: &[usize]) -> Result<PartialVector> {
    let precise = || model.posteriors(x).and_then(PreciseMarginals::new);
    match method {
        Method::Skeptic => br_skeptical_prediction(&model.with_s(hyper)?.marginal_intervals(x)?),
        Method::Reject => reject_predict(&precise()?, hyper),
        Method::AbstainSep => abstain_sep(&precise()?, hyper),
        Method::AbstainPar => abstain_par(&precise()?, hyper),
        Method::Precise => Ok(PartialVector::from(precise_bayes_hamming(precise()?.as_slice())?)),
    }
}

fn sweep(cfg: &ExperimentConfig) -> Vec<(Method, f64)> {
    cfg.methods
        .iter()
        .flat_map(|&method| {
            let values = match method {
                Method::Skeptic => cfg.s.clone(),
                Method::Reject => cfg.gamma.clone(),
                Method::AbstainSep => cfg.c_sep.clone(),
                Method::AbstainPar => cfg.c_par.clone(),
                Method::Precise => vec![0.0],
            };
            values.into_iter().map(move |v| (method, v))
        })
        .collect()
}

/// Fits on `train`, predicts `test` with every `(method, hyper-parameter)` and averages IC and CP over test rows.
fn evaluate_split(
    cfg: &ExperimentConfig,
    name: &str,
    train: &RawDataset,
    test: &RawDataset,
    truth: &[BinaryVector],
    level: f64,
    trial: usize,
) -> Result<Vec<MetricsRow>> {
    let model = NccModel::fit_raw(train, cfg.bins, 0.0)?;
    let xs = test.features.iter().map(|x| model.discretize_row(x)).collect::<Result<Vec<_>>>()?;
    sweep(cfg)
        .into_iter()
        .map(|(method, hyper)| {
            let (mut ic, mut cp) = (0.0, 0.0);
            for (x, y) in xs.iter().zip(truth) {
                let r = MetricsRecord::evaluate(&predict(method, hyper, &model, x)?, y)?;
                ic += r.incorrectness;
                cp += r.completeness;
            }
            let n = xs.len() as f64;
            Ok(MetricsRow {
                dataset: name.to_owned(),
                method: method.name().to_owned(),
                hyperparameter: hyper,
                level,
                trial,
                ic: ic / n,
                cp: cp / n,
            })
        })
        .collect()
}

/// Runs the configured protocol on `raw` and aggregates IC and CP.
pub fn run_dataset_on(cfg: &ExperimentConfig, raw: &RawDataset, name: &str) -> Result<DatasetReport> {
    cfg.validate()?;
    let truth_rows = raw.complete_labels()?;
    let truth: Vec<BinaryVector> = truth_rows.iter().map(|r| BinaryVector::from_labels(r)).collect::<Result<_>>()?;

    let units: Vec<(usize, usize, Split)> = match cfg.protocol {
        Protocol::CrossValidation => {
            let splits = cross_validation(raw.n(), cfg.cv_shuffles, cfg.cv_folds, cfg.seed)?;
            (0..cfg.levels.len()).flat_map(|l| splits.iter().cloned().enumerate().map(move |(t, s)| (l, t, s))).collect()
        }
        Protocol::Downsampling => {
            let mut units = Vec::new();
            for (l, &pct) in cfg.levels.iter().enumerate() {
                if pct.fract() != 0.0 || pct < 0.0 {
                    return Err(Error::InvalidParameter { name: "level", value: pct, reason: "training percentage must be an integer" });
                }
                for t in 0..cfg.downsample_repeats {
                    units.push((l, t, downsample_split(&raw.labels, &raw.label_names, pct as u32, t as u64, cfg.seed)?));
                }
            }
            units
        }
    };

    let chunks = map_units(cfg.parallel, &units, |(l, t, split)| {
        let level = cfg.levels[*l];
        let mut train = raw.subset(&split.train);
        if cfg.protocol == Protocol::CrossValidation && level > 0.0 {
            let spec = CorruptionSpec { kind: cfg.corruption, percentage: level, per_column: cfg.per_column };
            let mut rng = seed::sub_rng(cfg.seed, &[*l as u64, *t as u64, 0xC0]);
            train.labels = corrupt(&train.labels, &spec, &mut rng)?;
        }
        let test = raw.subset(&split.test);
        let y: Vec<BinaryVector> = split.test.iter().map(|&r| truth[r]).collect();
        evaluate_split(cfg, name, &train, &test, &y, level, *t)
    })?;
    let rows: Vec<MetricsRow> = chunks.into_iter().flatten().collect();
    let summary = summarize(&rows);

    let in_range = rows.iter().all(|r| (0.0..=1.0).contains(&r.ic) && (0.0..=1.0).contains(&r.cp));
    let expected = units.len() * sweep(cfg).len();
    let audits = vec![
        Audit::new("IC and CP lie in [0, 1]", in_range, format!("{} rows", rows.len())),
        Audit::new("one row per split and hyper-parameter", rows.len() == expected, format!("{} of {expected}", rows.len())),
    ];
    let report = DatasetReport { ci_method: CI_METHOD.to_owned(), protocol: cfg.protocol, rows, summary, audits };
    if let Some(dir) = cfg.output_dir() {
        report.write(dir)?;
    }
    Ok(report)
}

/// Loads the configured CSV dataset and runs [`run_dataset_on`].
pub fn run_dataset_experiment(cfg: &ExperimentConfig) -> Result<DatasetReport> {
    let path = cfg.dataset.as_ref().ok_or(Error::Parse { what: "dataset path", input: "none configured".into() })?;
    let raw = RawDataset::load(path)?;
    let name = cfg
        .dataset_name
        .clone()
        .unwrap_or_else(|| path.file_stem().map_or("dataset".into(), |s| s.to_string_lossy().into_owned()));
    run_dataset_on(cfg, &raw, &name)
}

/// Synthetic discrete multi-label data: `d` features on `0..z`, `m` labels
/// driven by a shared latent factor and label-specific feature weights.
pub fn synthetic_dataset(n: usize, m: usize, d: usize, z: usize, seed_value: u64) -> Result<RawDataset> {
    if n == 0 || m == 0 || d == 0 || z < 2 {
        return Err(Error::InvalidParameter { name: "shape", value: 0.0, reason: "n, m, d must be positive and z >= 2" });
    }
    let mut rng = seed::rng(seed_value);
    let weights: Vec<Vec<f64>> = (0..m).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let bias: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.6..0.6)).collect();
    let centre = (z as f64 - 1.0) / 2.0;
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let latent: f64 = rng.gen_range(-1.0..1.0);
        let x: Vec<usize> = (0..d)
            .map(|i| {
                let shift = if i % 2 == 0 { latent } else { -latent };
                let v = centre + shift * centre + rng.gen_range(-centre - 0.5..centre + 0.5);
                v.round().clamp(0.0, z as f64 - 1.0) as usize
            })
            .collect();
        let y: Vec<Option<bool>> = (0..m)
            .map(|j| {
                let score: f64 = weights[j].iter().zip(&x).map(|(w, &v)| w * (v as f64 - centre) / centre).sum::<f64>()
                    + bias[j]
                    + 0.8 * latent;
                let noise = rng.gen_range(-1.0..1.0) + rng.gen_range(-1.0..1.0);
                Some(score + noise > 0.0)
            })
            .collect();
        features.push(x.into_iter().map(|v| v as f64).collect());
        labels.push(y);
    }
    Ok(RawDataset {
        feature_names: (0..d).map(|i| format!("x{i}")).collect(),
        label_names: (0..m).map(|j| format!("l{j}")).collect(),
        features,
        labels,
    })
}

/// Parameters of the synthetic dataset shipped as `fixtures/synthetic.csv`.
pub const SYNTHETIC_SHAPE: (usize, usize, usize, usize, u64) = (500, 6, 8, 4, 17);

/// Regenerates the bundled synthetic dataset: 500 rows, 8 features on `0..4`, 6 labels.
pub fn bundled_synthetic() -> Result<RawDataset> {
    let (n, m, d, z, seed_value) = SYNTHETIC_SHAPE;
    synthetic_dataset(n, m, d, z, seed_value)
}

/// Decision summary printed by the `decide` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecideOutput {
    pub m: usize,
    pub maximal_set: PredictionSet,
    pub outer_partial_vector: PartialVector,
    pub checks: u64,
    pub marginals: Vec<crate::interval::ProbabilityInterval>,
    pub distance: u64,
}

pub fn decide(tree: &ImpreciseBinaryTree) -> Result<DecideOutput> {
    let outcome = maximal_set_subsets(tree)?;
    let marginals = tree.marginal_intervals();
    let outer = outer_partial_vector(&marginals)?;
    let distance = set_distance(&outer, &outcome.set)?;
    Ok(DecideOutput {
        m: tree.m(),
        maximal_set: outcome.set,
        outer_partial_vector: outer,
        checks: outcome.checks as u64,
        marginals,
        distance,
    })
}

/// Rule outputs printed by the `br` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrOutput {
    pub skeptic: PartialVector,
    pub interval_dominance: PredictionSet,
    pub gamma_minimax: PartialVector,
    pub gamma_minimin: PartialVector,
}

pub fn br_rules(model: &crate::br::MarginalIntervalModel) -> Result<BrOutput> {
    Ok(BrOutput {
        skeptic: br_skeptical_prediction(model)?,
        interval_dominance: interval_dominance_set(model)?,
        gamma_minimax: gamma_minimax(model)?,
        gamma_minimin: crate::br::gamma_minimin(model)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_sim() -> ExperimentConfig {
        ExperimentConfig { m: vec![2, 3], epsilon: vec![0.05, 0.45], trees_per_cell: 30, repetitions: 3, ..Default::default() }
    }

    #[test]
    fn config_round_trips() {
        let cfg = ExperimentConfig { dataset: Some("d.csv".into()), protocol: Protocol::Downsampling, ..Default::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
        let partial: ExperimentConfig = serde_json::from_str(r#"{"kind": "timing", "m": [3, 4]}"#).unwrap();
        assert_eq!(partial.kind, ExperimentKind::Timing);
        assert_eq!(partial.trees_per_cell, 200);
        let full = ExperimentConfig::default().full_scale();
        assert_eq!((full.trees_per_cell, full.repetitions), (2000, 5));
    }

    #[test]
    fn simulation_summary_is_mean_of_rows() {
        let report = run_simulation(&small_sim()).unwrap();
        assert_eq!(report.rows.len(), 12);
        for s in &report.summary {
            let reps: Vec<&SimulationRow> = report.rows.iter().filter(|r| r.m == s.m && r.epsilon == s.epsilon).collect();
            let mean = reps.iter().map(|r| r.q0).sum::<f64>() / reps.len() as f64;
            assert!((mean - s.q0).abs() < 1e-9);
            assert!((s.q0 + s.q25 + s.q50 + s.q100 - 100.0).abs() < 1e-9);
        }
        assert_eq!(report.cell(2, 0.45).unwrap().q0, 100.0);
    }

    #[test]
    fn simulation_is_deterministic_under_parallelism() {
        let a = run_simulation(&small_sim()).unwrap();
        let b = run_simulation(&ExperimentConfig { parallel: false, ..small_sim() }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn golden_report_passes() {
        let report = run_worked_examples().unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn half_width() {
        let (mean, hw) = mean_half_width(&[1.0, 2.0, 3.0]);
        assert_eq!(mean, 2.0);
        assert!((hw - 1.96 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(mean_half_width(&[4.0]), (4.0, 0.0));
    }

    #[test]
    fn timing_small() {
        let cfg = ExperimentConfig { m: vec![1, 2], timing_instances: 3, timing_min_millis: 2, ..Default::default() };
        let report = run_timing(&cfg).unwrap();
        assert!(report.audits.iter().all(|a| a.passed));
        assert_eq!((report.rows[1].naive_checks, report.rows[1].subset_checks), (12, 8));
    }

    #[test]
    fn tiny_dataset_run() {
        let raw = synthetic_dataset(60, 3, 4, 3, 5).unwrap();
        let cfg = ExperimentConfig {
            cv_shuffles: 1,
            cv_folds: 3,
            levels: vec![0.0, 50.0],
            bins: 3,
            ..Default::default()
        };
        let report = run_dataset_on(&cfg, &raw, "tiny").unwrap();
        assert!(report.audits.iter().all(|a| a.passed), "{:?}", report.audits);
        assert_eq!(report.rows.len(), 2 * 3 * sweep(&cfg).len());
    }
}
