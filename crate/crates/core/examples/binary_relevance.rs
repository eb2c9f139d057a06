//! Closed-form rules for independent marginal intervals.
//!
//! cargo run --example binary_relevance

use skeptic::br::{br_skeptical_prediction, gamma_minimax, gamma_minimin, interval_dominance_set};
use skeptic::decision::maximal_set_subsets;
use skeptic::MarginalIntervalModel;

fn main() -> skeptic::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/interval_dominance.json"))
        .map_err(|e| skeptic::Error::Io { path: "interval_dominance.json".into(), source: e })?;
    let model: MarginalIntervalModel = serde_json::from_str(&text)?;

    println!("skeptic (maximal = E-admissible): {}", br_skeptical_prediction(&model)?);
    println!("interval dominance:               {}", interval_dominance_set(&model)?);
    println!("gamma-minimax:                    {}", gamma_minimax(&model)?);
    println!("gamma-minimin:                    {}", gamma_minimin(&model)?);
    for y in skeptic::BinaryVector::all(2)? {
        let (lo, up) = model.hamming_bounds(&y);
        println!("  expected Hamming loss of {y} in [{lo:.1}, {up:.1}]");
    }

    // The same model as a tree gives the same answer through the subset rule.
    println!("the subset rule on the equivalent tree: {}", maximal_set_subsets(&model.to_tree()?)?.set);
    Ok(())
}
