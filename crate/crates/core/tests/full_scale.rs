//! Full-size approximation study. Slow in debug builds, so opt in with `--ignored`.

use skeptic::harness::{run_simulation, ExperimentConfig};

#[test]
#[ignore = "full-scale run: cargo test --release --test full_scale -- --ignored"]
fn q0_at_m5_eps005_within_2_of_reference() {
    let cfg = ExperimentConfig { m: vec![5], epsilon: vec![0.05], ..Default::default() }.full_scale();
    let report = run_simulation(&cfg).unwrap();
    let cell = report.cell(5, 0.05).unwrap();
    println!("q0(5, 0.05) = {:.2} ± {:.2} over {} trees", cell.q0, cell.q0_half_width, cfg.trees_per_cell * cfg.repetitions);
    assert!((cell.q0 - 90.94).abs() <= 2.0, "q0 = {}", cell.q0);
}

#[test]
#[ignore = "full-scale run: cargo test --release --test full_scale -- --ignored"]
fn q0_is_100_at_eps045_for_every_m() {
    let cfg = ExperimentConfig { epsilon: vec![0.45], ..Default::default() }.full_scale();
    let report = run_simulation(&cfg).unwrap();
    for m in 2..=6 {
        assert_eq!(report.cell(m, 0.45).unwrap().q0, 100.0, "m = {m}");
    }
}
