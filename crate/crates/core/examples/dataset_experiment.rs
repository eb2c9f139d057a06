//! Missing-label study with 10x10 cross-validation on the bundled synthetic dataset.
//!
//! cargo run --release --example dataset_experiment

use skeptic::harness::{bundled_synthetic, run_dataset_on, ExperimentConfig, Method};

fn main() -> skeptic::Result<()> {
    let cfg = ExperimentConfig {
        levels: vec![0.0, 40.0, 80.0],
        bins: 4,
        methods: vec![Method::Skeptic, Method::Reject, Method::Precise],
        s: vec![0.0, 2.0, 8.0],
        gamma: vec![0.0, 0.2],
        ..Default::default()
    };
    let report = run_dataset_on(&cfg, &bundled_synthetic()?, "synthetic")?;
    println!("method    param  missing%     IC      CP");
    for s in &report.summary {
        println!("{:<8} {:>5}  {:>8}  {:.3}  {:.3}", s.method, s.hyperparameter, s.level, s.ic, s.cp);
    }
    Ok(())
}
