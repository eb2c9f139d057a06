//! Lower expectations on imprecise probabilistic trees, checked against brute force.
//!
//! cargo run --example tree_inference

use skeptic::tree::{extreme_point_oracle, generate_tree};
use skeptic::{CostVector, ImpreciseBinaryTree};

fn main() -> skeptic::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let rec = ImpreciseBinaryTree::load(format!("{dir}/recursion.json"))?;

    // Cost 1 when the two labels disagree.
    let xor = CostVector::new(2, vec![0.0, 1.0, 1.0, 0.0])?;
    println!("lower expectation  {:.4}", rec.lower_expectation(&xor));
    println!("upper expectation  {:.4}", rec.upper_expectation(&xor));
    println!("extreme points     {:.4}", extreme_point_oracle(&rec, &xor)?);
    for (i, iv) in rec.marginal_intervals().iter().enumerate() {
        println!("P(Y{} = 1) in {iv}", i + 1);
    }

    let chain = ImpreciseBinaryTree::load(format!("{dir}/precise_chain.json"))?;
    for y in skeptic::BinaryVector::all(2)? {
        println!("P({y}) = {:.2}", chain.joint_probability(&y)?);
    }

    let mut rng = skeptic::seed::rng(7);
    let tree = generate_tree(4, 0.2, &mut rng)?;
    let cost = CostVector::from_fn(4, |y| y.bits().count_ones() as f64)?;
    println!(
        "random m=4 tree, expected number of relevant labels in [{:.4}, {:.4}]",
        tree.lower_expectation(&cost),
        tree.upper_expectation(&cost)
    );
    Ok(())
}
