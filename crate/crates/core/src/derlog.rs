//! Logarithmic vector fields along hypersurfaces and discriminants.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::germ::{MapGerm, VectorField};
use crate::groebner::{Engine, ModuleElement, Submodule};
use crate::lift::prune;
use crate::poly::{weighted_degree_check, Grading, Polynomial, VarSet};

/// A hypersurface germ `{h = 0}` through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    h: Polynomial,
    degree: Option<u64>,
}

impl Divisor {
    /// If the ring declares weights, `h` must be quasihomogeneous.
    pub fn new(h: Polynomial) -> Result<Self> {
        if h.is_zero() || !h.constant_term().is_zero() {
            return Err(Error::Structure(format!("{h} does not define a hypersurface through 0")));
        }
        let degree = match h.vars().weights() {
            Some(w) => match weighted_degree_check(&h, w) {
                Grading::Homogeneous(d) => Some(d),
                Grading::Mixed(ds) => {
                    return Err(Error::Structure(format!(
                        "{h} is not quasihomogeneous (degrees {ds:?})"
                    )))
                }
            },
            None => None,
        };
        Ok(Divisor { h, degree })
    }

    pub fn equation(&self) -> &Polynomial {
        &self.h
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.h.vars()
    }

    /// Weighted degree, when the ring is weighted.
    pub fn degree(&self) -> Option<u64> {
        self.degree
    }

    fn partials(&self) -> Vec<ModuleElement> {
        (0..self.vars().len())
            .map(|i| ModuleElement::new(self.vars(), vec![self.h.derivative_at(i)]).expect("same ring"))
            .collect()
    }

    /// The quotient `α` with `η(h) = α h`, if it exists.
    pub fn quotient(&self, eta: &VectorField) -> Result<Option<Polynomial>> {
        Ok(eta.apply(&self.h)?.div_exact(&self.h))
    }
}

/// `Derlog(h) = {η : η(h) = 0}`, as syzygies of the partial derivatives.
pub fn derlog_strict(engine: &Engine, d: &Divisor) -> Result<Submodule> {
    let syz = engine.syzygy_module(&d.partials())?;
    for g in syz.generators() {
        let eta = VectorField::from_element(g.clone())?;
        let v = eta.apply(d.equation())?;
        if !v.is_zero() {
            return Err(Error::NotLogarithmic(v));
        }
    }
    prune(engine, &syz)
}

/// Generators of `Derlog(Δ)` together with their quotients `α_i`.
#[derive(Clone, Debug)]
pub struct LogModule {
    pub module: Submodule,
    pub quotients: Vec<Polynomial>,
}

/// `Derlog({h = 0}) = {η : η(h) ∈ ⟨h⟩}`: the first `p` components of the
/// syzygies of `(∂₁h, …, ∂_p h, h)`.
pub fn derlog_delta(engine: &Engine, d: &Divisor) -> Result<LogModule> {
    let vars = d.vars();
    let p = vars.len();
    let mut gens = d.partials();
    gens.push(ModuleElement::new(vars, vec![d.equation().clone()])?);
    let syz = engine.syzygy_module(&gens)?;
    let projected = syz
        .generators()
        .iter()
        .map(|g| ModuleElement::new(vars, g.entries()[..p].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let module = prune(engine, &Submodule::new(vars, p, projected)?)?;
    let quotients = module
        .generators()
        .iter()
        .map(|g| {
            let eta = VectorField::from_element(g.clone())?;
            d.quotient(&eta)?
                .ok_or_else(|| Error::NotLogarithmic(eta.apply(d.equation()).unwrap_or_else(|_| Polynomial::zero(vars))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LogModule { module, quotients })
}

/// `Σ w_i X_i ∂/∂X_i` for the ring's weights.
pub fn euler_field(vars: &Arc<VarSet>) -> Result<VectorField> {
    let w = vars
        .weights()
        .ok_or_else(|| Error::Structure(format!("ring ({vars}) has no weights")))?;
    let entries = (0..vars.len())
        .map(|i| Polynomial::var_at(vars, i).scale(&crate::poly::int(i64::from(w[i]))))
        .collect();
    VectorField::new(vars, entries)
}

/// Reduced equation of the discriminant of an equidimensional germ:
/// eliminate the source from `⟨X_i − f_i, det df⟩`, then remove repeated
/// factors. Normalized to coprime integer coefficients with positive
/// leading coefficient.
pub fn discriminant(engine: &Engine, f: &MapGerm) -> Result<Divisor> {
    let det = f.jacobian_determinant()?;
    if det.is_zero() {
        return Err(Error::NotSubmersive);
    }
    let src = f.source();
    let tgt = f.target();
    let joint = f.graph_ring()?;
    let mut gens = Vec::with_capacity(tgt.len() + 1);
    for (i, c) in f.components().iter().enumerate() {
        let x = Polynomial::var(&joint, tgt.name(i))?;
        gens.push(&x - &c.embed(&joint)?);
    }
    gens.push(det.embed(&joint)?);
    let elim: Vec<&str> = src.names().iter().map(String::as_str).collect();
    let ideal = engine.eliminate(&Submodule::ideal(&joint, gens)?, &elim)?;
    let h = match ideal.ideal_generators().as_slice() {
        [h] => h.embed(tgt)?,
        gs => return Err(Error::NotPrincipal(gs.len())),
    };
    Divisor::new(squarefree_part(engine, &h)?)
}

/// `h / gcd(h, ∂₁h, …, ∂_p h)`, primitive. Over a field of characteristic
/// zero this removes every repeated factor.
pub fn squarefree_part(engine: &Engine, h: &Polynomial) -> Result<Polynomial> {
    let mut g = h.clone();
    for i in 0..h.vars().len() {
        g = engine.gcd(&g, &h.derivative_at(i))?;
    }
    h.div_exact(&g)
        .map(|r| r.primitive())
        .ok_or_else(|| Error::NotDivisible(format!("{h} by {g}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, r: &Arc<VarSet>) -> Polynomial {
        Polynomial::parse(s, r).unwrap()
    }

    fn field(space: &Arc<VarSet>, xs: &[&str]) -> VectorField {
        VectorField::new(space, xs.iter().map(|c| p(c, space)).collect()).unwrap()
    }

    const H: &str = "256*X^3 + 27*Y^4 + 144*X*Y^2*Z + 128*X^2*Z^2 + 4*Y^2*Z^3 + 16*X*Z^4";

    #[test]
    fn strict_derlog_of_circle() {
        let r = VarSet::new(["X", "Y"]).unwrap();
        let e = Engine::default();
        let m = derlog_strict(&e, &Divisor::new(p("X^2 + Y^2", &r)).unwrap()).unwrap();
        assert_eq!(m.generators(), &[field(&r, &["Y", "-X"]).into_element()]);
    }

    #[test]
    fn normal_crossing() {
        let r = VarSet::new(["X", "Y"]).unwrap();
        let e = Engine::default();
        let d = Divisor::new(p("X*Y", &r)).unwrap();
        let strict = derlog_strict(&e, &d).unwrap();
        assert!(e.contains(&strict, field(&r, &["X", "-Y"]).as_element()).unwrap());
        let delta = derlog_delta(&e, &d).unwrap();
        assert_eq!(delta.module.len(), 2);
        let expected = Submodule::new(
            &r,
            2,
            vec![field(&r, &["X", "0"]).into_element(), field(&r, &["0", "Y"]).into_element()],
        )
        .unwrap();
        assert!(e.equal(&delta.module, &expected).unwrap());
    }

    #[test]
    fn smooth_hypersurface() {
        let r = VarSet::new(["X", "Y", "Z"]).unwrap();
        let e = Engine::default();
        let delta = derlog_delta(&e, &Divisor::new(p("X", &r)).unwrap()).unwrap();
        let expected = Submodule::new(
            &r,
            3,
            vec![
                field(&r, &["X", "0", "0"]).into_element(),
                field(&r, &["0", "1", "0"]).into_element(),
                field(&r, &["0", "0", "1"]).into_element(),
            ],
        )
        .unwrap();
        assert!(e.equal(&delta.module, &expected).unwrap());
        for (g, a) in delta.module.generators().iter().zip(&delta.quotients) {
            let eta = VectorField::from_element(g.clone()).unwrap();
            assert_eq!(eta.apply(&p("X", &r)).unwrap(), a * &p("X", &r));
        }
    }

    #[test]
    fn euler_fields() {
        let r = VarSet::with_weights(["X", "Y", "Z"], vec![4, 3, 2]).unwrap();
        let e = euler_field(&r).unwrap();
        assert_eq!(e, field(&r, &["4*X", "3*Y", "2*Z"]));
        let d = Divisor::new(p(H, &r)).unwrap();
        assert_eq!(d.degree(), Some(12));
        assert_eq!(e.apply(d.equation()).unwrap(), d.equation().scale(&crate::poly::int(12)));
        let one = VarSet::with_weights(["X"], vec![1]).unwrap();
        assert_eq!(euler_field(&one).unwrap(), field(&one, &["X"]));
    }

    #[test]
    fn fold_discriminant() {
        let s = VarSet::new(["x"]).unwrap();
        let t = VarSet::new(["X"]).unwrap();
        let f = MapGerm::new(&s, &t, vec![p("x^2", &s)]).unwrap();
        let d = discriminant(&Engine::default(), &f).unwrap();
        assert_eq!(d.equation(), &p("X", &t));
    }

    #[test]
    fn swallowtail_discriminant() {
        let s = VarSet::with_weights(["x", "y", "z"], vec![1, 3, 2]).unwrap();
        let t = VarSet::with_weights(["X", "Y", "Z"], vec![4, 3, 2]).unwrap();
        let f = MapGerm::new(&s, &t, vec![p("x^4 + y*x + z*x^2", &s), p("y", &s), p("z", &s)]).unwrap();
        let d = discriminant(&Engine::default(), &f).unwrap();
        assert_eq!(d.equation(), &p(H, &t));
    }

    #[test]
    fn repeated_factors_are_removed() {
        let t = VarSet::new(["X", "Y"]).unwrap();
        let e = Engine::default();
        let h = p("-2*X^2*Y*(X - Y^2)^3", &t);
        assert_eq!(squarefree_part(&e, &h).unwrap(), p("X*Y*(X - Y^2)", &t).primitive());
        assert_eq!(squarefree_part(&e, &p("X*Y", &t)).unwrap(), p("X*Y", &t));

        let s = VarSet::new(["x", "y"]).unwrap();
        let f = MapGerm::new(&s, &t, vec![p("x^3", &s), p("y", &s)]).unwrap();
        assert_eq!(discriminant(&e, &f).unwrap().equation(), &p("X", &t));
    }

    #[test]
    fn rejects_non_equidimensional_and_degenerate() {
        let s = VarSet::new(["x"]).unwrap();
        let t = VarSet::new(["X", "Y"]).unwrap();
        let e = Engine::default();
        let f = MapGerm::new(&s, &t, vec![p("x", &s), p("x^2", &s)]).unwrap();
        assert!(matches!(discriminant(&e, &f), Err(Error::NotEquidimensional { .. })));
        let s2 = VarSet::new(["x", "y"]).unwrap();
        let g = MapGerm::new(&s2, &t, vec![p("x + y", &s2), p("(x + y)^2", &s2)]).unwrap();
        assert!(matches!(discriminant(&e, &g), Err(Error::NotSubmersive)));
    }
}
