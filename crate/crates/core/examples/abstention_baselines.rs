//! Rejection and partial abstention on precise marginals, with their generalized loss.
//!
//! cargo run --example abstention_baselines

use skeptic::baselines::{abstain_par, abstain_sep, generalized_loss, reject_predict, Penalty, PreciseMarginals};
use skeptic::BinaryVector;

fn main() -> skeptic::Result<()> {
    let p = PreciseMarginals::new(vec![0.92, 0.61, 0.5, 0.3, 0.05])?;
    let truth: BinaryVector = "11000".parse()?;
    for gamma in [0.0, 0.1, 0.25] {
        println!("reject  gamma = {gamma:<4}  {}", reject_predict(&p, gamma)?);
    }
    for c in [0.1, 0.3, 0.5] {
        let sep = abstain_sep(&p, c)?;
        let par = abstain_par(&p, c)?;
        println!(
            "c = {c}: SEP {sep} (loss {:.3})  PAR {par} (loss {:.3})",
            generalized_loss(&truth, &sep, Penalty::Sep(c))?,
            generalized_loss(&truth, &par, Penalty::Par(c))?
        );
    }
    Ok(())
}
