//! Naive credal classifier on the bundled synthetic dataset: interval width
//! grows with `s` and predictions become partial.
//!
//! cargo run --example ncc_pipeline

use skeptic::br::br_skeptical_prediction;
use skeptic::ncc::{NccModel, RawDataset};

fn main() -> skeptic::Result<()> {
    let raw = RawDataset::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/synthetic.csv"))?;
    let train = raw.subset(&(0..400).collect::<Vec<_>>());
    let test = raw.subset(&(400..raw.n()).collect::<Vec<_>>());
    let model = NccModel::fit_raw(&train, 4, 0.0)?;
    println!("{} features, {} labels, trained on {} rows", raw.feature_names.len(), raw.m(), train.n());

    let x = model.discretize_row(&test.features[0])?;
    let truth: String = test.labels[0].iter().map(|v| if *v == Some(true) { '1' } else { '0' }).collect();
    println!("first test row {x:?}, truth {truth}");
    for s in [0.0, 1.0, 4.0, 16.0] {
        let intervals = model.with_s(s)?.marginal_intervals(&x)?;
        let shown: Vec<String> = intervals.intervals().iter().map(|iv| format!("[{:.2}, {:.2}]", iv.lower(), iv.upper())).collect();
        println!("s = {s:>4}: {} -> {}", shown.join(" "), br_skeptical_prediction(&intervals)?);
    }
    Ok(())
}
