use std::collections::BTreeSet;

use super::Polynomial;

/// Outcome of [`weighted_degree_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    Homogeneous(u64),
    /// The distinct weighted degrees that occur; empty for the zero polynomial.
    Mixed(BTreeSet<u64>),
}

pub fn weighted_degree_check(p: &Polynomial, weights: &[u32]) -> Grading {
    assert_eq!(weights.len(), p.vars().len(), "one weight per variable");
    let degrees: BTreeSet<u64> = p
        .terms()
        .iter()
        .map(|(m, _)| m.weighted_degree(weights))
        .collect();
    if degrees.len() == 1 {
        Grading::Homogeneous(*degrees.iter().next().unwrap())
    } else {
        Grading::Mixed(degrees)
    }
}

impl Polynomial {
    /// Weighted degree under the ambient weights, if homogeneous.
    pub fn quasi_degree(&self) -> Option<u64> {
        let w = self.vars().weights()?;
        match weighted_degree_check(self, w) {
            Grading::Homogeneous(d) => Some(d),
            Grading::Mixed(_) => None,
        }
    }
}
