//! Growth of the pairwise rule against the subset rule as labels are added.
//!
//! cargo run --release --example timing

use skeptic::harness::{run_timing, ExperimentConfig};

fn main() -> skeptic::Result<()> {
    let cfg = ExperimentConfig { m: vec![3, 4, 5, 6, 7], timing_instances: 10, ..Default::default() };
    let report = run_timing(&cfg)?;
    println!(" m   pairwise checks  subset checks   pairwise (s)   subset (s)   ratio");
    for r in &report.rows {
        println!(
            "{:>2}   {:>15}  {:>13}   {:>12.3e}  {:>10.3e}  {:>6.2}",
            r.m, r.naive_checks, r.subset_checks, r.naive_mean_seconds, r.subset_mean_seconds, r.ratio
        );
    }
    println!("ratio strictly increasing: {}", report.ratio_strictly_increasing);
    Ok(())
}
