//! E-admissibility versus maximality on a finite credal set under zero-one loss.
//!
//! cargo run --example finite_credal_set

use skeptic::decision::{eadmissible_set_finite, maximal_set_naive};
use skeptic::{fixtures, BinaryVector, CredalOracle, LossMatrix};

fn main() -> skeptic::Result<()> {
    let credal = fixtures::four_point_credal_set();
    let loss = LossMatrix::zero_one(2)?;
    println!("E-admissible: {}", eadmissible_set_finite(&credal, &loss)?);
    println!("maximal:      {}", maximal_set_naive(&credal, &loss)?.set);

    println!("lower expected loss differences (row = reference):");
    let all: Vec<BinaryVector> = BinaryVector::all(2)?.collect();
    for r in &all {
        let row: Vec<String> = all
            .iter()
            .map(|y| if y == r { "   -  ".into() } else { format!("{:+.2}", credal.lower_expectation(&loss.difference(y, r))) })
            .collect();
        println!("  {r}: {}", row.join("  "));
    }
    Ok(())
}
