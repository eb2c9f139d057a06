use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use skeptic::eval::CorruptionKind;
use skeptic::harness::{self, Audit, ExperimentConfig, Protocol};
use skeptic::{ImpreciseBinaryTree, MarginalIntervalModel};

#[derive(Parser)]
#[command(name = "skeptic", version, about = "Skeptical multi-label prediction under credal sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal set, outer partial vector and check count for a tree JSON file.
    Decide { tree: PathBuf },
    /// Binary-relevance rules for a JSON list of [lower, upper] marginals.
    Br { model: PathBuf },
    /// Exact-vs-outer approximation study over random trees.
    Simulate(SimulateArgs),
    /// Naive pairwise rule vs the subset rule timing trend.
    Timing(TimingArgs),
    /// Re-run every worked example and report pass/fail.
    Examples,
    /// NCC pipelines with corruption or downsampling on a CSV dataset.
    Dataset(DatasetArgs),
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV and JSON outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run work units on one thread.
    #[arg(long)]
    serial: bool,
}

impl Common {
    fn config(&self) -> skeptic::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        if self.serial {
            cfg.parallel = false;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    /// 2000 trees per cell and five repetitions.
    #[arg(long)]
    full_scale: bool,
}

#[derive(Args)]
struct TimingArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Cv,
    Downsampling,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorruptionArg {
    Missing,
    Reversing,
    Flipping,
}

#[derive(Args)]
struct DatasetArgs {
    #[command(flatten)]
    common: Common,
    /// CSV with feature columns followed by `y:`-prefixed label columns.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_enum)]
    protocol: Option<ProtocolArg>,
    #[arg(long, value_enum)]
    corruption: Option<CorruptionArg>,
    /// Bernoulli parameter for flipping corruption.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Corrupt a share of each label column instead of the whole grid.
    #[arg(long)]
    per_column: bool,
    /// Corruption percentages (cv) or training percentages (downsampling).
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    c_sep: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    c_par: Option<Vec<f64>>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    shuffles: Option<usize>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    repeats: Option<usize>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn print_json<T: Serialize>(value: &T) -> skeptic::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> skeptic::Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| skeptic::Error::Io { path: path.into(), source: e })?;
    Ok(serde_json::from_str(&text)?)
}

fn audits_pass(audits: &[Audit]) -> bool {
    for a in audits {
        eprintln!("audit {}: {} ({})", if a.passed { "ok" } else { "FAILED" }, a.name, a.detail);
    }
    audits.iter().all(|a| a.passed)
}

fn run(cli: Cli) -> skeptic::Result<bool> {
    match cli.command {
        Command::Decide { tree } => {
            let tree: ImpreciseBinaryTree = read_json(&tree)?;
            print_json(&harness::decide(&tree)?)?;
            Ok(true)
        }
        Command::Br { model } => {
            let model: MarginalIntervalModel = read_json(&model)?;
            print_json(&harness::br_rules(&model)?)?;
            Ok(true)
        }
        Command::Simulate(args) => {
            let mut cfg = args.common.config()?;
            if args.full_scale {
                cfg = cfg.full_scale();
            }
            set(&mut cfg.m, args.m);
            set(&mut cfg.epsilon, args.epsilon);
            set(&mut cfg.trees_per_cell, args.trees);
            set(&mut cfg.repetitions, args.reps);
            let report = harness::run_simulation(&cfg)?;
            print_json(&report.summary)?;
            Ok(audits_pass(&report.audits))
        }
        Command::Timing(args) => {
            let mut cfg = args.common.config()?;
            if args.m.is_none() && args.common.config.is_none() {
                cfg.m = vec![3, 4, 5, 6, 7];
            }
            set(&mut cfg.m, args.m);
            set(&mut cfg.timing_instances, args.instances);
            set(&mut cfg.timing_epsilon, args.epsilon);
            let report = harness::run_timing(&cfg)?;
            print_json(&report)?;
            Ok(audits_pass(&report.audits))
        }
        Command::Examples => {
            let report = harness::run_worked_examples()?;
            print!("{report}");
            Ok(report.all_passed())
        }
        Command::Dataset(args) => {
            let mut cfg = args.common.config()?;
            if args.data.is_some() {
                cfg.dataset = args.data;
            }
            if let Some(p) = args.protocol {
                cfg.protocol = match p {
                    ProtocolArg::Cv => Protocol::CrossValidation,
                    ProtocolArg::Downsampling => Protocol::Downsampling,
                };
                if matches!(p, ProtocolArg::Downsampling) && args.levels.is_none() && args.common.config.is_none() {
                    cfg.levels = (1..=9).map(|k| 10.0 * k as f64).collect();
                }
            }
            if let Some(c) = args.corruption {
                cfg.corruption = match c {
                    CorruptionArg::Missing => CorruptionKind::Missing,
                    CorruptionArg::Reversing => CorruptionKind::Reversing,
                    CorruptionArg::Flipping => CorruptionKind::Flipping { beta: args.beta },
                };
            }
            cfg.per_column |= args.per_column;
            set(&mut cfg.levels, args.levels);
            set(&mut cfg.s, args.s);
            set(&mut cfg.gamma, args.gamma);
            set(&mut cfg.c_sep, args.c_sep);
            set(&mut cfg.c_par, args.c_par);
            set(&mut cfg.bins, args.bins);
            set(&mut cfg.cv_shuffles, args.shuffles);
            set(&mut cfg.cv_folds, args.folds);
            set(&mut cfg.downsample_repeats, args.repeats);
            let report = harness::run_dataset_experiment(&cfg)?;
            print_json(&report.summary)?;
            Ok(audits_pass(&report.audits))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
