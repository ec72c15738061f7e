//! Polynomial map-germs at the origin, unfoldings and vector fields.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{ModuleElement, Submodule};
use crate::poly::{Polynomial, Substitution, VarSet};

/// A polynomial map `(K^n, 0) -> (K^p, 0)`.
#[derive(Clone, PartialEq, Eq)]
pub struct MapGerm {
    source: Arc<VarSet>,
    target: Arc<VarSet>,
    components: Vec<Polynomial>,
}

impl MapGerm {
    pub fn new(source: &Arc<VarSet>, target: &Arc<VarSet>, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != target.len() {
            return Err(Error::Structure(format!(
                "{} components for a target with {} coordinates",
                components.len(),
                target.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.vars() != source {
                return Err(Error::ambient(format!(
                    "component {i} lives in ({}) not ({source})",
                    c.vars()
                )));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::Structure(format!(
                    "component {i} ({c}) does not vanish at the origin"
                )));
            }
        }
        Ok(MapGerm {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(vars: &Arc<VarSet>) -> Self {
        let comps = (0..vars.len()).map(|i| Polynomial::var_at(vars, i)).collect();
        MapGerm::new(vars, vars, comps).expect("identity is a germ")
    }

    pub fn source(&self) -> &Arc<VarSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarSet> {
        &self.target
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    /// The pullback `target -> source` sending `X_i` to `f_i`.
    pub fn pullback(&self) -> Substitution {
        let mut s = Substitution::new(&self.target, &self.source);
        for (i, c) in self.components.iter().enumerate() {
            s.set_at(i, c.clone()).expect("components live in the source");
        }
        s
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MapGerm) -> Result<MapGerm> {
        if inner.target != self.source {
            return Err(Error::ambient(format!(
                "cannot compose: inner target ({}) vs outer source ({})",
                inner.target, self.source
            )));
        }
        let pb = inner.pullback();
        let comps = self
            .components
            .iter()
            .map(|c| pb.apply(c))
            .collect::<Result<Vec<_>>>()?;
        MapGerm::new(&inner.source, &self.target, comps)
    }

    /// `p × n` matrix of partial derivatives, row `i` = gradient of `f_i`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.components
            .iter()
            .map(|c| (0..self.source.len()).map(|j| c.derivative_at(j)).collect())
            .collect()
    }

    /// Columns of the Jacobian: the generators of `tf(θ_n)`.
    pub fn tf_generators(&self) -> Submodule {
        let jac = self.jacobian();
        let cols = (0..self.source.len())
            .map(|j| {
                ModuleElement::new(&self.source, jac.iter().map(|row| row[j].clone()).collect())
                    .expect("jacobian entries share the source")
            })
            .collect();
        Submodule::new(&self.source, self.target.len(), cols).expect("columns have rank p")
    }

    /// `df · ξ` for a source vector field.
    pub fn tf(&self, xi: &VectorField) -> Result<ModuleElement> {
        if xi.space() != &self.source {
            return Err(Error::ambient(format!(
                "source field over ({}) for a germ with source ({})",
                xi.space(),
                self.source
            )));
        }
        let rows = self
            .jacobian()
            .iter()
            .map(|row| {
                row.iter()
                    .zip(xi.entries())
                    .fold(Polynomial::zero(&self.source), |acc, (a, b)| &acc + &(a * b))
            })
            .collect();
        ModuleElement::new(&self.source, rows)
    }

    /// `η ∘ f` for a target vector field.
    pub fn wf(&self, eta: &VectorField) -> Result<ModuleElement> {
        if eta.space() != &self.target {
            return Err(Error::ambient(format!(
                "target field over ({}) for a germ with target ({})",
                eta.space(),
                self.target
            )));
        }
        let pb = self.pullback();
        let entries = eta
            .entries()
            .iter()
            .map(|e| pb.apply(e))
            .collect::<Result<Vec<_>>>()?;
        ModuleElement::new(&self.source, entries)
    }

    /// Jacobian determinant of an equidimensional germ.
    pub fn jacobian_determinant(&self) -> Result<Polynomial> {
        if self.source.len() != self.target.len() {
            return Err(Error::NotEquidimensional {
                source_dim: self.source.len(),
                target_dim: self.target.len(),
            });
        }
        Ok(determinant(&self.jacobian(), &self.source))
    }

    /// The ring `K[x, X]` with the source variables first. Names must be
    /// disjoint.
    pub fn graph_ring(&self) -> Result<Arc<VarSet>> {
        let (src, tgt) = (&self.source, &self.target);
        if let Some(n) = src.names().iter().find(|n| tgt.index_of(n).is_some()) {
            return Err(Error::ambient(format!("source and target share the variable name `{n}`")));
        }
        let mut names: Vec<String> = src.names().to_vec();
        names.extend(tgt.names().iter().cloned());
        let weights = match (src.weights(), tgt.weights()) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        VarSet::build(names, weights)
    }

    /// Whether each component is quasihomogeneous of the degree given by the
    /// target weight, under the source weights. Needs both rings weighted.
    pub fn is_quasihomogeneous(&self) -> bool {
        let (Some(ws), Some(wt)) = (self.source.weights(), self.target.weights()) else {
            return false;
        };
        self.components.iter().zip(wt).all(|(c, &d)| {
            c.terms()
                .iter()
                .all(|(m, _)| m.weighted_degree(ws) == u64::from(d))
        })
    }
}

/// Laplace expansion along the first row; matrices here are at most 5×5.
pub(crate) fn determinant(m: &[Vec<Polynomial>], vars: &Arc<VarSet>) -> Polynomial {
    let n = m.len();
    match n {
        0 => Polynomial::one(vars),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Polynomial::zero(vars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &determinant(&minor, vars);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

impl fmt::Debug for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MapGerm[({}) -> ({})] (", self.source, self.target)?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A vector field `Σ a_i ∂/∂X_i` on the coordinate space `space`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    entries: ModuleElement,
}

impl VectorField {
    pub fn new(space: &Arc<VarSet>, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != space.len() {
            return Err(Error::Rank {
                expected: space.len(),
                found: entries.len(),
            });
        }
        Ok(VectorField {
            entries: ModuleElement::new(space, entries)?,
        })
    }

    pub fn from_element(e: ModuleElement) -> Result<Self> {
        let space = e.vars().clone();
        Self::new(&space, e.into_entries())
    }

    pub fn zero(space: &Arc<VarSet>) -> Self {
        VectorField {
            entries: ModuleElement::zero(space, space.len()),
        }
    }

    pub fn space(&self) -> &Arc<VarSet> {
        self.entries.vars()
    }

    pub fn entries(&self) -> &[Polynomial] {
        self.entries.entries()
    }

    pub fn entry(&self, i: usize) -> &Polynomial {
        self.entries.entry(i)
    }

    pub fn as_element(&self) -> &ModuleElement {
        &self.entries
    }

    pub fn into_element(self) -> ModuleElement {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// The derivation `h ↦ Σ a_i ∂h/∂X_i`.
    pub fn apply(&self, h: &Polynomial) -> Result<Polynomial> {
        if h.vars() != self.space() {
            return Err(Error::ambient(format!(
                "function over ({}) for a field over ({})",
                h.vars(),
                self.space()
            )));
        }
        Ok(self
            .entries()
            .iter()
            .enumerate()
            .fold(Polynomial::zero(h.vars()), |acc, (i, a)| {
                &acc + &(a * &h.derivative_at(i))
            }))
    }

    /// The same entries over a namesake space (possibly different weights).
    pub fn embed(&self, space: &Arc<VarSet>) -> Result<VectorField> {
        VectorField::from_element(self.entries.embed(space)?)
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entries)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entries)
    }
}

/// Checks `h ∘ h_inv = id` and `h_inv ∘ h = id` exactly.
pub fn check_inverse(h: &MapGerm, h_inv: &MapGerm) -> Result<()> {
    for (outer, inner) in [(h, h_inv), (h_inv, h)] {
        let comp = outer.compose(inner)?;
        for (i, c) in comp.components().iter().enumerate() {
            let id = Polynomial::var_at(inner.source(), i);
            if *c != id {
                return Err(Error::InverseCheckFailed {
                    component: i,
                    found: c.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `L(η) = dH · (η ∘ H⁻¹)`, with `dH` also evaluated along `H⁻¹`.
pub fn transport(eta: &VectorField, h: &MapGerm, h_inv: &MapGerm) -> Result<VectorField> {
    if h.source() != h_inv.target() || h.target() != h_inv.source() {
        return Err(Error::ambient("map and inverse do not have swapped rings"));
    }
    check_inverse(h, h_inv)?;
    if eta.space() != h.source() {
        return Err(Error::ambient(format!(
            "field over ({}) for a change of coordinates of ({})",
            eta.space(),
            h.source()
        )));
    }
    let back = h_inv.pullback();
    let moved = eta
        .entries()
        .iter()
        .map(|e| back.apply(e))
        .collect::<Result<Vec<_>>>()?;
    let jac = h.jacobian();
    let target = h.target();
    let entries = jac
        .iter()
        .map(|row| {
            row.iter().zip(&moved).try_fold(Polynomial::zero(target), |acc, (d, m)| {
                Ok::<_, Error>(&acc + &(&back.apply(d)? * m))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(target, entries)
}

/// `F(x, λ) = (f_λ(x), λ)` with parameters at explicit positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Unfolding {
    total: MapGerm,
    source_params: Vec<usize>,
    target_params: Vec<usize>,
    core: MapGerm,
}

impl Unfolding {
    /// Validates the unfolding laws; `core` is matched to the restriction of
    /// `total` by position, so its variables may carry different names.
    pub fn new(
        total: MapGerm,
        source_params: Vec<usize>,
        target_params: Vec<usize>,
        core: MapGerm,
    ) -> Result<Self> {
        if source_params.len() != target_params.len() {
            return Err(Error::Structure(format!(
                "{} source parameters but {} target parameters",
                source_params.len(),
                target_params.len()
            )));
        }
        for (set, len, what) in [
            (&source_params, total.source().len(), "source"),
            (&target_params, total.target().len(), "target"),
        ] {
            let mut seen = vec![false; len];
            for &i in set.iter() {
                if i >= len || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Structure(format!("bad {what} parameter index {i}")));
                }
            }
        }
        for (&s, &t) in source_params.iter().zip(&target_params) {
            let expected = Polynomial::var_at(total.source(), s);
            if total.component(t) != &expected {
                return Err(Error::Structure(format!(
                    "target component {} is {}, expected the parameter {}",
                    total.target().name(t),
                    total.component(t),
                    total.source().name(s)
                )));
            }
        }
        let u = Unfolding {
            total,
            source_params,
            target_params,
            core,
        };
        let restricted = u.restrict_total()?;
        if restricted.source().len() != u.core.source().len()
            || restricted.target().len() != u.core.target().len()
        {
            return Err(Error::Structure(format!(
                "restriction has shape {} -> {}, core has {} -> {}",
                restricted.source().len(),
                restricted.target().len(),
                u.core.source().len(),
                u.core.target().len()
            )));
        }
        for (i, (a, b)) in restricted.components().iter().zip(u.core.components()).enumerate() {
            if a.rebase(u.core.source())? != *b {
                return Err(Error::Structure(format!(
                    "restriction component {i} is {a}, core has {b}"
                )));
            }
        }
        Ok(u)
    }

    pub fn total(&self) -> &MapGerm {
        &self.total
    }

    pub fn core(&self) -> &MapGerm {
        &self.core
    }

    pub fn source_params(&self) -> &[usize] {
        &self.source_params
    }

    pub fn target_params(&self) -> &[usize] {
        &self.target_params
    }

    pub fn parameter_count(&self) -> usize {
        self.source_params.len()
    }

    /// Non-parameter target coordinates, in order.
    pub fn target_core_indices(&self) -> Vec<usize> {
        (0..self.total.target().len())
            .filter(|i| !self.target_params.contains(i))
            .collect()
    }

    fn source_core_indices(&self) -> Vec<usize> {
        (0..self.total.source().len())
            .filter(|i| !self.source_params.contains(i))
            .collect()
    }

    fn restrict_total(&self) -> Result<MapGerm> {
        let src_keep = self.source_core_indices();
        let src = self.total.source().select(&src_keep)?;
        let tgt = self.total.target().select(&self.target_core_indices())?;
        let comps = self
            .target_core_indices()
            .iter()
            .map(|&t| {
                let p = self.total.component(t).set_zero(&self.source_params);
                p.embed(&src)
            })
            .collect::<Result<Vec<_>>>()?;
        MapGerm::new(&src, &tgt, comps)
    }

    /// `f_0`, recomputed from the total map and expressed over the core's
    /// rings. Equal to [`Unfolding::core`] by construction.
    pub fn restrict(&self) -> Result<MapGerm> {
        let r = self.restrict_total()?;
        let comps = r
            .components()
            .iter()
            .map(|c| c.rebase(self.core.source()))
            .collect::<Result<Vec<_>>>()?;
        MapGerm::new(self.core.source(), self.core.target(), comps)
    }
}
