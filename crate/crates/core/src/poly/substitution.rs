use std::collections::HashMap;
use std::sync::Arc;

use super::{Polynomial, Rational, VarSet};
use crate::error::{Error, Result};

/// A ring map `source -> target` given by the image of each source variable.
#[derive(Clone, Debug)]
pub struct Substitution {
    source: Arc<VarSet>,
    target: Arc<VarSet>,
    images: Vec<Option<Polynomial>>,
}

impl Substitution {
    /// No images assigned yet.
    pub fn new(source: &Arc<VarSet>, target: &Arc<VarSet>) -> Self {
        Substitution {
            source: source.clone(),
            target: target.clone(),
            images: vec![None; source.len()],
        }
    }

    pub fn identity(vars: &Arc<VarSet>) -> Self {
        Substitution {
            source: vars.clone(),
            target: vars.clone(),
            images: (0..vars.len())
                .map(|i| Some(Polynomial::var_at(vars, i)))
                .collect(),
        }
    }

    /// Builds from a name -> image table; every image must live in `target`.
    pub fn from_map(
        source: &Arc<VarSet>,
        target: &Arc<VarSet>,
        map: &HashMap<String, Polynomial>,
    ) -> Result<Self> {
        let mut s = Self::new(source, target);
        for (name, image) in map {
            s = s.set(name, image.clone())?;
        }
        Ok(s)
    }

    pub fn set(mut self, name: &str, image: Polynomial) -> Result<Self> {
        let i = self.source.require(name)?;
        self.set_at(i, image)?;
        Ok(self)
    }

    pub fn set_at(&mut self, i: usize, image: Polynomial) -> Result<()> {
        if image.vars() != &self.target {
            return Err(Error::ambient(format!(
                "image of `{}` lives in ({}) not ({})",
                self.source.name(i),
                image.vars(),
                self.target
            )));
        }
        self.images[i] = Some(image);
        Ok(())
    }

    /// Fills every unassigned variable with its namesake in the target, when
    /// one exists.
    pub fn keep_by_name(mut self) -> Self {
        for i in 0..self.images.len() {
            if self.images[i].is_none() {
                if let Some(j) = self.target.index_of(self.source.name(i)) {
                    self.images[i] = Some(Polynomial::var_at(&self.target, j));
                }
            }
        }
        self
    }

    pub fn source(&self) -> &Arc<VarSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarSet> {
        &self.target
    }

    pub fn image(&self, i: usize) -> Option<&Polynomial> {
        self.images[i].as_ref()
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.vars() != &self.source {
            return Err(Error::ambient(format!(
                "substitution expects ({}) but got ({})",
                self.source,
                p.vars()
            )));
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut acc = Polynomial::zero(&self.target);
        for (m, c) in p.terms() {
            let mut t = Polynomial::constant(&self.target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = self.images[i].as_ref().ok_or_else(|| {
                    Error::ambient(format!("no image for variable `{}`", self.source.name(i)))
                })?;
                let pw = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                t = &t * &*pw;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// `then ∘ self`: first apply `self`, then `then`.
    pub fn then(&self, then: &Substitution) -> Result<Substitution> {
        if then.source != self.target {
            return Err(Error::ambient("composition of incompatible substitutions"));
        }
        let images = self
            .images
            .iter()
            .map(|img| img.as_ref().map(|p| then.apply(p)).transpose())
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution {
            source: self.source.clone(),
            target: then.target.clone(),
            images,
        })
    }

    /// Images evaluated at a rational point of the target.
    pub fn evaluate(&self, point: &[Rational]) -> Option<Vec<Rational>> {
        self.images
            .iter()
            .map(|img| img.as_ref().map(|p| p.evaluate(point)))
            .collect()
    }
}
