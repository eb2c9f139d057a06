//! Set-valued competitors built on precise marginals: a rejection threshold
//! and partial abstention under linear (SEP) or concave (PAR) penalties.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{BinaryVector, PartialVector};

/// Precise estimates of `P(Y_i = 1)`, one per label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PreciseMarginals {
    p: Vec<f64>,
}

impl PreciseMarginals {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some(bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidProbability(*bad));
        }
        if p.is_empty() {
            return Err(Error::LabelCount(0, crate::vector::MAX_LABELS));
        }
        Ok(Self { p })
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// `min(p_i, 1 − p_i)`: the expected Hamming loss of the Bayes decision on label `i`.
    pub fn uncertainty(&self, i: usize) -> f64 {
        self.p[i].min(1.0 - self.p[i])
    }

    fn bayes(&self, i: usize) -> bool {
        self.p[i] >= 0.5
    }

    fn with_abstentions(&self, abstain: impl Fn(usize) -> bool) -> PartialVector {
        let entries: Vec<Option<bool>> = (0..self.m()).map(|i| (!abstain(i)).then(|| self.bayes(i))).collect();
        PartialVector::from_entries(&entries).expect("label count validated on construction")
    }
}

/// Abstention penalty `f(a)` for `a` abstained labels out of `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Penalty {
    /// `f(a) = a·c`.
    Sep(f64),
    /// `f(a) = a·m / (m + a) · c`.
    Par(f64),
}

impl Penalty {
    pub fn cost(&self, abstained: usize, m: usize) -> f64 {
        let a = abstained as f64;
        match *self {
            Penalty::Sep(c) => a * c,
            Penalty::Par(c) => a * m as f64 / (m as f64 + a) * c,
        }
    }
}

fn check_penalty(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "c", value: c, reason: "penalty must be positive" })
    }
}

/// Label-wise rejection: 1 if `p_i > 1/2 + γ`, 0 if `p_i ≤ 1/2 − γ`, `*` otherwise.
///
/// At `γ = 0` a probability of exactly 1/2 maps to 0.
pub fn reject_predict(p: &PreciseMarginals, gamma: f64) -> Result<PartialVector> {
    if !(0.0..0.5).contains(&gamma) {
        return Err(Error::InvalidParameter { name: "gamma", value: gamma, reason: "must lie in [0, 0.5)" });
    }
    let entries: Vec<Option<bool>> = p
        .p
        .iter()
        .map(|&pi| {
            if pi > 0.5 + gamma {
                Some(true)
            } else if pi <= 0.5 - gamma {
                Some(false)
            } else {
                None
            }
        })
        .collect();
    PartialVector::from_entries(&entries)
}

/// Risk-minimizing partial abstention under [`Penalty::Sep`]: abstain exactly where `c < min(p_i, 1 − p_i)`.
pub fn abstain_sep(p: &PreciseMarginals, c: f64) -> Result<PartialVector> {
    check_penalty(c)?;
    Ok(p.with_abstentions(|i| c < p.uncertainty(i)))
}

/// Risk-minimizing partial abstention under [`Penalty::Par`].
///
/// Labels are ranked by uncertainty (ties by index) and the best number `k`
/// of abstentions is found by a scan; ties in risk keep the smaller `k`.
pub fn abstain_par(p: &PreciseMarginals, c: f64) -> Result<PartialVector> {
    check_penalty(c)?;
    let m = p.m();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p.uncertainty(b).total_cmp(&p.uncertainty(a)));
    let penalty = Penalty::Par(c);
    let mut decided_risk: f64 = (0..m).map(|i| p.uncertainty(i)).sum();
    let mut best = (decided_risk, 0);
    for k in 1..=m {
        decided_risk -= p.uncertainty(order[k - 1]);
        let risk = decided_risk + penalty.cost(k, m);
        if risk < best.0 {
            best = (risk, k);
        }
    }
    let mut abstain = vec![false; m];
    for &i in &order[..best.1] {
        abstain[i] = true;
    }
    Ok(p.with_abstentions(|i| abstain[i]))
}

/// Hamming loss on the decided labels plus the abstention penalty.
pub fn generalized_loss(truth: &BinaryVector, pred: &PartialVector, penalty: Penalty) -> Result<f64> {
    if truth.m() != pred.m() {
        return Err(Error::DimensionMismatch { expected: pred.m(), found: truth.m() });
    }
    let wrong = (0..pred.m()).filter(|&i| pred.get(i).is_some_and(|v| v != truth.get(i))).count();
    Ok(wrong as f64 + penalty.cost(pred.star_count(), pred.m()))
}

/// Expected [`generalized_loss`] when the labels are independent with marginals `p`.
pub fn expected_generalized_loss(p: &PreciseMarginals, pred: &PartialVector, penalty: Penalty) -> Result<f64> {
    if p.m() != pred.m() {
        return Err(Error::DimensionMismatch { expected: pred.m(), found: p.m() });
    }
    let decided: f64 = (0..p.m())
        .filter_map(|i| pred.get(i).map(|v| if v { 1.0 - p.p[i] } else { p.p[i] }))
        .sum();
    Ok(decided + penalty.cost(pred.star_count(), p.m()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn marg(p: &[f64]) -> PreciseMarginals {
        PreciseMarginals::new(p.to_vec()).unwrap()
    }

    /// Best expected loss over every decided set and every labelling of it.
    fn brute_force(p: &PreciseMarginals, penalty: Penalty) -> f64 {
        let m = p.m();
        let mut best = f64::INFINITY;
        for known in 0..1u32 << m {
            for values in 0..1u32 << m {
                if values & !known != 0 {
                    continue;
                }
                let entries: Vec<Option<bool>> = (0..m)
                    .map(|i| {
                        let bit = 1 << (m - 1 - i);
                        (known & bit != 0).then_some(values & bit != 0)
                    })
                    .collect();
                let pred = PartialVector::from_entries(&entries).unwrap();
                best = best.min(expected_generalized_loss(p, &pred, penalty).unwrap());
            }
        }
        best
    }

    #[test]
    fn reject_examples() {
        assert_eq!(reject_predict(&marg(&[0.7, 0.5]), 0.15).unwrap().to_string(), "1*");
        assert_eq!(reject_predict(&marg(&[0.7, 0.5, 0.2]), 0.0).unwrap().to_string(), "100");
        assert_eq!(reject_predict(&marg(&[0.1, 0.93, 0.6]), 0.49).unwrap().to_string(), "***");
        assert_eq!(reject_predict(&marg(&[0.65]), 0.15).unwrap().to_string(), "*");
        assert!(reject_predict(&marg(&[0.5]), 0.5).is_err());
    }

    #[test]
    fn sep_examples() {
        assert_eq!(abstain_sep(&marg(&[0.9, 0.6, 0.5]), 0.2).unwrap().to_string(), "1**");
        assert!(abstain_sep(&marg(&[0.5, 0.3, 0.99]), 0.5).unwrap().is_complete());
        assert_eq!(abstain_sep(&marg(&[0.0, 1.0]), 1e-6).unwrap().to_string(), "01");
        assert!(abstain_sep(&marg(&[0.5]), 0.0).is_err());
    }

    #[test]
    fn par_examples() {
        assert_eq!(abstain_par(&marg(&[0.5, 0.5]), 0.1).unwrap().to_string(), "**");
        let p = marg(&[0.8, 0.35, 0.6]);
        assert_eq!(abstain_par(&p, 1.0).unwrap().to_string(), "101");
        assert_eq!(abstain_par(&marg(&[0.55, 0.9, 0.45]), 0.5).unwrap().to_string(), "*1*");
    }

    #[test]
    fn loss_examples() {
        let truth: BinaryVector = "101".parse().unwrap();
        let full: PartialVector = "111".parse().unwrap();
        assert_eq!(generalized_loss(&truth, &full, Penalty::Sep(0.3)).unwrap(), 1.0);
        let stars = PartialVector::all_star(3).unwrap();
        assert!((generalized_loss(&truth, &stars, Penalty::Sep(0.3)).unwrap() - 0.9).abs() < 1e-12);
        assert!((generalized_loss(&truth, &stars, Penalty::Par(0.3)).unwrap() - 0.45).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn sep_and_par_minimize_expected_loss(p in prop::collection::vec(0.0f64..=1.0, 1..=4), c in 0.05f64..1.0) {
            let p = marg(&p);
            let sep = expected_generalized_loss(&p, &abstain_sep(&p, c).unwrap(), Penalty::Sep(c)).unwrap();
            prop_assert!((sep - brute_force(&p, Penalty::Sep(c))).abs() < 1e-9);
            let par = expected_generalized_loss(&p, &abstain_par(&p, c).unwrap(), Penalty::Par(c)).unwrap();
            prop_assert!((par - brute_force(&p, Penalty::Par(c))).abs() < 1e-9);
        }

        #[test]
        fn abstention_is_monotone(p in prop::collection::vec(0.0f64..=1.0, 1..=8), a in 0.0f64..0.5, b in 0.0f64..0.5) {
            let p = marg(&p);
            let (g1, g2) = (a.min(b), a.max(b));
            let (r1, r2) = (reject_predict(&p, g1).unwrap(), reject_predict(&p, g2).unwrap());
            prop_assert_eq!(r1.known_mask() & r2.known_mask(), r2.known_mask());
            let (c1, c2) = (g1 + 0.01, g2 + 0.01);
            let (s1, s2) = (abstain_sep(&p, c1).unwrap(), abstain_sep(&p, c2).unwrap());
            prop_assert_eq!(s1.known_mask() & s2.known_mask(), s1.known_mask());
        }

        #[test]
        fn gamma_zero_is_complete(p in prop::collection::vec(0.0f64..=1.0, 1..=8)) {
            prop_assume!(p.iter().all(|&v| v != 0.5));
            prop_assert!(reject_predict(&marg(&p), 0.0).unwrap().is_complete());
        }
    }
}
