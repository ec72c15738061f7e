use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::MonomialOrder;
use crate::error::{Error, Result};

/// An ordered list of named coordinates, optionally graded by positive
/// integer weights.
///
/// Two var sets are equal when names and weights agree. The default term
/// order is derived from the weights and cached.
#[derive(Clone)]
pub struct VarSet {
    names: Vec<String>,
    weights: Option<Vec<u32>>,
    order: MonomialOrder,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::build(names.into_iter().map(Into::into).collect(), None)
    }

    pub fn with_weights<I, S>(names: I, weights: Vec<u32>) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::build(names.into_iter().map(Into::into).collect(), Some(weights))
    }

    pub fn build(names: Vec<String>, weights: Option<Vec<u32>>) -> Result<Arc<Self>> {
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::ambient(format!("`{n}` is not a valid variable name")));
            }
            if names[..i].contains(n) {
                return Err(Error::ambient(format!("duplicate variable `{n}`")));
            }
        }
        if let Some(w) = &weights {
            if w.len() != names.len() {
                return Err(Error::ambient(format!(
                    "{} weights for {} variables",
                    w.len(),
                    names.len()
                )));
            }
            if w.contains(&0) {
                return Err(Error::ambient("weights must be positive"));
            }
        }
        let order = match &weights {
            Some(w) => MonomialOrder::WeightedGrevLex(w.clone()),
            None => MonomialOrder::GrevLex,
        };
        Ok(Arc::new(VarSet {
            names,
            weights,
            order,
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::ambient(format!("unknown variable `{name}` in ({self})")))
    }

    /// The order polynomials over this ring are stored in.
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Same names, no weights.
    pub fn unweighted(&self) -> Arc<VarSet> {
        Self::build(self.names.clone(), None).expect("names already validated")
    }

    /// A copy with `extra` variables prepended (used for auxiliary
    /// elimination variables). Weights of new variables default to 1.
    pub fn with_prefix(&self, extra: &[&str]) -> Result<Arc<VarSet>> {
        let mut names: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        names.extend(self.names.iter().cloned());
        let weights = self.weights.as_ref().map(|w| {
            let mut v = vec![1; extra.len()];
            v.extend_from_slice(w);
            v
        });
        Self::build(names, weights)
    }

    /// Keep only the variables at the given indices, in that order.
    pub fn select(&self, idx: &[usize]) -> Result<Arc<VarSet>> {
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        let weights = self
            .weights
            .as_ref()
            .map(|w| idx.iter().map(|&i| w[i]).collect());
        Self::build(names, weights)
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.weights == other.weights
    }
}

impl Eq for VarSet {}

impl Hash for VarSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.names.hash(state);
        self.weights.hash(state);
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet({self})")
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.names.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(n)?;
            if let Some(w) = &self.weights {
                write!(f, ":{}", w[i])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_weights() {
        assert!(VarSet::new(["x", "x"]).is_err());
        assert!(VarSet::with_weights(["x", "y"], vec![1]).is_err());
        assert!(VarSet::with_weights(["x"], vec![0]).is_err());
        assert!(VarSet::new(["2x"]).is_err());
    }

    #[test]
    fn default_order_follows_weights() {
        let a = VarSet::new(["x", "y"]).unwrap();
        assert_eq!(*a.order(), MonomialOrder::GrevLex);
        let b = VarSet::with_weights(["x", "y"], vec![4, 1]).unwrap();
        assert_eq!(*b.order(), MonomialOrder::WeightedGrevLex(vec![4, 1]));
        assert_ne!(*a, *b);
    }
}
