//! Exact maximal sets versus the outer approximation on random trees.
//!
//! cargo run --release --example simulation

use skeptic::harness::{run_simulation, ExperimentConfig};

fn main() -> skeptic::Result<()> {
    let cfg = ExperimentConfig { m: vec![2, 3, 4, 5], trees_per_cell: 200, repetitions: 3, ..Default::default() };
    let report = run_simulation(&cfg)?;
    println!(" m    eps      q0          q<=.25      q<=.5       q<=1");
    for s in &report.summary {
        println!(
            "{:>2}  {:.2}  {:6.2}±{:4.2}  {:6.2}±{:4.2}  {:6.2}±{:4.2}  {:6.2}±{:4.2}",
            s.m, s.epsilon, s.q0, s.q0_half_width, s.q25, s.q25_half_width, s.q50, s.q50_half_width, s.q100, s.q100_half_width
        );
    }
    println!("intervals: {}", report.ci_method);
    Ok(())
}
