//! Exact maximal sets under Hamming loss: the subset rule against the pairwise rule
//! and against the label-wise outer approximation.
//!
//! cargo run --example hamming_maximality

use skeptic::decision::{check_counts, maximal_set_subsets, maximal_set_naive, outer_partial_vector};
use skeptic::eval::set_distance;
use skeptic::tree::generate_tree;
use skeptic::{fixtures, LossMatrix};

fn main() -> skeptic::Result<()> {
    let tree = fixtures::outer_gap_tree();
    let exact = maximal_set_subsets(&tree)?;
    let naive = maximal_set_naive(&tree, &LossMatrix::hamming(2)?)?;
    let outer = outer_partial_vector(&tree.marginal_intervals())?;
    println!("maximal set {} after {} checks (pairwise: {} checks)", exact.set, exact.checks, naive.checks);
    println!("outer approximation {outer} adds {} vector(s)", set_distance(&outer, &exact.set)?);

    let mut rng = skeptic::seed::rng(3);
    for m in 3..=6 {
        let tree = generate_tree(m, 0.1, &mut rng)?;
        let exact = maximal_set_subsets(&tree)?;
        let outer = outer_partial_vector(&tree.marginal_intervals())?;
        let (pairwise, subset) = check_counts(m as u32);
        println!(
            "m={m}: {:>2} maximal vectors, outer {outer} covers {}, checks {subset} vs {pairwise}",
            exact.set.len(),
            outer.cardinality()
        );
    }
    Ok(())
}
