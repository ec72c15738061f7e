use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, VarSet};

use super::GroebnerBasis;

/// A vector of polynomials over a common ambient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    vars: Arc<VarSet>,
    entries: Vec<Polynomial>,
}

impl ModuleElement {
    pub fn new(vars: &Arc<VarSet>, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Rank {
                expected: 1,
                found: 0,
            });
        }
        for e in &entries {
            if e.vars() != vars {
                return Err(Error::ambient(format!(
                    "entry over ({}) in an element over ({vars})",
                    e.vars()
                )));
            }
        }
        Ok(ModuleElement {
            vars: vars.clone(),
            entries,
        })
    }

    /// Builds from entries, taking the ambient from the first one.
    pub fn from_entries(entries: Vec<Polynomial>) -> Result<Self> {
        let vars = entries
            .first()
            .ok_or(Error::Rank {
                expected: 1,
                found: 0,
            })?
            .vars()
            .clone();
        Self::new(&vars, entries)
    }

    pub fn zero(vars: &Arc<VarSet>, rank: usize) -> Self {
        ModuleElement {
            vars: vars.clone(),
            entries: vec![Polynomial::zero(vars); rank],
        }
    }

    pub fn unit(vars: &Arc<VarSet>, rank: usize, i: usize) -> Self {
        let mut e = Self::zero(vars, rank);
        e.entries[i] = Polynomial::one(vars);
        e
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Polynomial> {
        self.entries
    }

    pub fn entry(&self, i: usize) -> &Polynomial {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    fn check(&self, other: &ModuleElement) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::Rank {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        if self.vars != other.vars {
            return Err(Error::ambient(format!("({}) vs ({})", self.vars, other.vars)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &ModuleElement, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Self {
        ModuleElement {
            vars: self.vars.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul_poly(&self, c: &Polynomial) -> Result<ModuleElement> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleElement {
            vars: self.vars.clone(),
            entries,
        })
    }

    pub fn scale(&self, c: &Rational) -> ModuleElement {
        self.map(|e| e.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> ModuleElement {
        let entries: Vec<Polynomial> = self.entries.iter().map(f).collect();
        let vars = entries[0].vars().clone();
        ModuleElement { vars, entries }
    }

    pub fn try_map(&self, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<ModuleElement> {
        ModuleElement::from_entries(self.entries.iter().map(f).collect::<Result<Vec<_>>>()?)
    }

    /// Re-expresses every entry over `target` by variable name.
    pub fn embed(&self, target: &Arc<VarSet>) -> Result<ModuleElement> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(target))
            .collect::<Result<Vec<_>>>()?;
        ModuleElement::new(target, entries)
    }

    /// `Σ coeffs[i] · gens[i]`.
    pub fn combination(
        vars: &Arc<VarSet>,
        rank: usize,
        coeffs: &[Polynomial],
        gens: &[ModuleElement],
    ) -> Result<ModuleElement> {
        if coeffs.len() != gens.len() {
            return Err(Error::Rank {
                expected: gens.len(),
                found: coeffs.len(),
            });
        }
        let mut acc = ModuleElement::zero(vars, rank);
        for (c, g) in coeffs.iter().zip(gens) {
            if c.is_zero() {
                continue;
            }
            acc = acc.try_add(&g.mul_poly(c)?)?;
        }
        Ok(acc)
    }

    /// Scaled to the primitive form of its first nonzero entry's leading
    /// coefficient: integer coprime coefficients, positive leading sign.
    pub fn primitive(&self) -> ModuleElement {
        let Some(first) = self.entries.iter().find(|e| !e.is_zero()) else {
            return self.clone();
        };
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        let mut den = num_bigint::BigInt::one();
        let mut num = num_bigint::BigInt::zero();
        for e in &self.entries {
            for (_, c) in e.terms() {
                den = den.lcm(c.denom());
            }
        }
        for e in &self.entries {
            for (_, c) in e.terms() {
                num = num.gcd(&(c.numer() * (&den / c.denom())));
            }
        }
        let mut s = Rational::new(den, num);
        if first.terms()[0].1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

#[derive(Default)]
pub(crate) struct GbCache {
    pub(crate) plain: Option<Arc<GroebnerBasis>>,
    pub(crate) lifting: Option<Arc<GroebnerBasis>>,
}

/// A finitely generated submodule of `R^rank`.
///
/// Gröbner bases computed for it are cached; clones share the cache.
#[derive(Clone)]
pub struct Submodule {
    vars: Arc<VarSet>,
    rank: usize,
    generators: Vec<ModuleElement>,
    pub(crate) cache: Arc<Mutex<GbCache>>,
}

impl Submodule {
    pub fn new(vars: &Arc<VarSet>, rank: usize, generators: Vec<ModuleElement>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Rank {
                expected: 1,
                found: 0,
            });
        }
        for g in &generators {
            if g.rank() != rank {
                return Err(Error::Rank {
                    expected: rank,
                    found: g.rank(),
                });
            }
            if g.vars() != vars {
                return Err(Error::ambient(format!(
                    "generator over ({}) in a module over ({vars})",
                    g.vars()
                )));
            }
        }
        Ok(Submodule {
            vars: vars.clone(),
            rank,
            generators,
            cache: Arc::default(),
        })
    }

    /// An ideal, as a rank-1 submodule.
    pub fn ideal(vars: &Arc<VarSet>, gens: Vec<Polynomial>) -> Result<Self> {
        let gens = gens
            .into_iter()
            .map(|p| ModuleElement::new(vars, vec![p]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, 1, gens)
    }

    pub fn free(vars: &Arc<VarSet>, rank: usize) -> Self {
        let gens = (0..rank).map(|i| ModuleElement::unit(vars, rank, i)).collect();
        Self::new(vars, rank, gens).expect("unit vectors are valid")
    }

    pub fn zero(vars: &Arc<VarSet>, rank: usize) -> Self {
        Self::new(vars, rank, vec![]).expect("empty generator list")
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn check_element(&self, v: &ModuleElement) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::Rank {
                expected: self.rank,
                found: v.rank(),
            });
        }
        if v.vars() != &self.vars {
            return Err(Error::ambient(format!(
                "element over ({}) for a module over ({})",
                v.vars(),
                self.vars
            )));
        }
        Ok(())
    }

    /// The ideal generators of a rank-1 module.
    pub fn ideal_generators(&self) -> Vec<Polynomial> {
        self.generators.iter().map(|g| g.entry(0).clone()).collect()
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Submodule")
            .field("vars", &self.vars)
            .field("rank", &self.rank)
            .field("generators", &self.generators)
            .finish()
    }
}
