//! Augmentations `Af(x, z) = (f_{z^k}(x), z)` of a germ by a one-parameter
//! stable unfolding, and the transforms between `Derlog(Δ(F))` and
//! `Derlog(Δ(Af))`.

use std::sync::Arc;

use crate::derlog::Divisor;
use crate::error::{Error, Result};
use crate::germ::{MapGerm, Unfolding, VectorField};
use crate::groebner::Submodule;
use crate::poly::{int, Monomial, Polynomial, Rational, Substitution, VarSet};

/// A one-parameter unfolding `F` of `f` together with `φ(z) = z^k`.
#[derive(Clone, Debug)]
pub struct AugmentationSpec {
    unfolding: Unfolding,
    k: u32,
    af: MapGerm,
}

/// Which residue classes [`AugmentationSpec::descend`] kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentMode {
    /// Inverse of [`AugmentationSpec::tilde`]: the last entry does not vanish on `Z = 0`.
    Tilde,
    /// Inverse of [`AugmentationSpec::tilde_div`]: the last entry vanishes on `Z = 0`.
    TildeDiv,
}

#[derive(Clone, Debug)]
pub struct Descent {
    pub mode: DescentMode,
    /// A field in `Derlog(Δ(F))`.
    pub eta: VectorField,
    /// The discarded part, itself in `Derlog(Δ(Af))`.
    pub remainder: VectorField,
    /// `η(H) = α H`.
    pub quotient: Polynomial,
}

fn scaled(vars: &VarSet, param: usize, k: u32) -> Option<Vec<u32>> {
    vars.weights().map(|w| {
        w.iter()
            .enumerate()
            .map(|(i, &x)| if i == param { x } else { x * k })
            .collect()
    })
}

impl AugmentationSpec {
    pub fn new(unfolding: &Unfolding, k: u32) -> Result<Self> {
        if unfolding.parameter_count() != 1 {
            return Err(Error::Structure(format!(
                "augmentation needs a one-parameter unfolding, got {} parameters",
                unfolding.parameter_count()
            )));
        }
        if k == 0 {
            return Err(Error::Structure("augmentation exponent k must be at least 1".into()));
        }
        let total = unfolding.total();
        let (lam, big_lam) = (unfolding.source_params()[0], unfolding.target_params()[0]);
        let src = VarSet::build(total.source().names().to_vec(), scaled(total.source(), lam, k))?;
        let tgt = VarSet::build(total.target().names().to_vec(), scaled(total.target(), big_lam, k))?;
        let mut sub = Substitution::new(total.source(), &src);
        for i in 0..src.len() {
            let img = Polynomial::var_at(&src, i);
            sub.set_at(i, if i == lam { img.pow(k) } else { img })?;
        }
        let comps = total
            .components()
            .iter()
            .enumerate()
            .map(|(t, c)| {
                if t == big_lam {
                    Ok(Polynomial::var_at(&src, lam))
                } else {
                    sub.apply(c)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let af = MapGerm::new(&src, &tgt, comps)?;
        Ok(AugmentationSpec {
            unfolding: unfolding.clone(),
            k,
            af,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn unfolding(&self) -> &Unfolding {
        &self.unfolding
    }

    /// `Af(x, z) = (f_{z^k}(x), z)`.
    pub fn augmented(&self) -> &MapGerm {
        &self.af
    }

    /// Index of the distinguished coordinate `Z` in the target.
    pub fn z(&self) -> usize {
        self.unfolding.target_params()[0]
    }

    fn lambda(&self) -> usize {
        self.unfolding.source_params()[0]
    }

    fn k_rat(&self) -> Rational {
        int(i64::from(self.k))
    }

    /// `AF(x, z, μ) = (f_{z^k + μ}(x), z, μ)`, a one-parameter unfolding of
    /// `Af`. The new variables are appended.
    pub fn build_af(&self) -> Result<Unfolding> {
        let total = self.unfolding.total();
        let src0 = self.af.source();
        let tgt0 = self.af.target();
        let mu = fresh(src0, "mu");
        let big_mu = fresh(tgt0, "M");
        let w_mu = src0.weights().map(|w| w[self.lambda()] * self.k);
        let src = append(src0, &mu, w_mu)?;
        let tgt = append(tgt0, &big_mu, w_mu)?;
        let (lam, z) = (self.lambda(), self.z());
        let mu_idx = src.len() - 1;
        let mut sub = Substitution::new(total.source(), &src);
        for i in 0..total.source().len() {
            let v = Polynomial::var_at(&src, i);
            let img = if i == lam {
                &v.pow(self.k) + &Polynomial::var_at(&src, mu_idx)
            } else {
                v
            };
            sub.set_at(i, img)?;
        }
        let mut comps = Vec::with_capacity(tgt.len());
        for (t, c) in total.components().iter().enumerate() {
            comps.push(if t == z { Polynomial::var_at(&src, lam) } else { sub.apply(c)? });
        }
        comps.push(Polynomial::var_at(&src, mu_idx));
        let big = MapGerm::new(&src, &tgt, comps)?;
        Unfolding::new(big, vec![mu_idx], vec![tgt.len() - 1], self.af.clone())
    }

    /// `Z ↦ Z^k`, from the ring of `F`'s target to the ring of `Af`'s.
    fn phi_sub(&self, from: &Arc<VarSet>) -> Result<Substitution> {
        let to = self.af.target();
        if from.names() != to.names() {
            return Err(Error::ambient(format!("field over ({from}) for an augmentation over ({to})")));
        }
        let mut s = Substitution::new(from, to);
        for i in 0..to.len() {
            let v = Polynomial::var_at(to, i);
            s.set_at(i, if i == self.z() { v.pow(self.k) } else { v })?;
        }
        Ok(s)
    }

    /// `p(X, Z^k)` for `p` over the target of `F`.
    pub fn substitute(&self, p: &Polynomial) -> Result<Polynomial> {
        self.phi_sub(p.vars())?.apply(p)
    }

    /// `φ′(Z) = kZ^{k−1}` over the target of `Af`.
    pub fn phi_prime(&self) -> Polynomial {
        let to = self.af.target();
        Polynomial::monomial(to, Monomial::var(to.len(), self.z(), self.k - 1), self.k_rat())
    }

    /// `h(X, Z) = H(X, Z^k)`.
    pub fn lift_divisor(&self, d: &Divisor) -> Result<Divisor> {
        Divisor::new(self.phi_sub(d.vars())?.apply(d.equation())?)
    }

    /// `η̃ = Σ η_i(X, Z^k) kZ^{k−1} ∂/∂X_i + η_z(X, Z^k) ∂/∂Z`.
    pub fn tilde(&self, eta: &VectorField) -> Result<VectorField> {
        let s = self.phi_sub(eta.space())?;
        let dphi = self.phi_prime();
        let entries = eta
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let moved = s.apply(e)?;
                Ok(if i == self.z() { moved } else { &moved * &dphi })
            })
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(self.af.target(), entries)
    }

    /// `η̃ / φ′`, defined when `η_z` vanishes on `Z = 0`: the `∂/∂X_i`
    /// entries are only substituted, and `η_z(X, Z^k)` is divided by `kZ^{k−1}`.
    pub fn tilde_div(&self, eta: &VectorField) -> Result<VectorField> {
        let z = self.z();
        if !eta.entry(z).set_zero(&[z]).is_zero() {
            return Err(Error::NotDivisible(format!(
                "last entry {} does not vanish on {} = 0",
                eta.entry(z),
                eta.space().name(z)
            )));
        }
        let s = self.phi_sub(eta.space())?;
        let dphi = self.phi_prime();
        let entries = eta
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let moved = s.apply(e)?;
                if i != z {
                    return Ok(moved);
                }
                moved
                    .div_exact(&dphi)
                    .ok_or_else(|| Error::NotDivisible(format!("{moved} by {dphi}")))
            })
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(self.af.target(), entries)
    }

    /// Splits `η̄ ∈ Derlog(Δ(Af))` into the part that comes from some
    /// `η ∈ Derlog(Δ(F))` through [`tilde`](Self::tilde) or
    /// [`tilde_div`](Self::tilde_div) and a remainder, by keeping the
    /// `Z`-exponent residue classes mod `k` those transforms produce.
    pub fn descend(&self, eta_bar: &VectorField, big_h: &Divisor) -> Result<Descent> {
        let h = self.lift_divisor(big_h)?;
        let eta_bar = eta_bar.embed(self.af.target())?;
        if h.quotient(&eta_bar)?.is_none() {
            return Err(Error::NotLogarithmic(eta_bar.apply(h.equation())?));
        }
        let z = self.z();
        let k = self.k;
        let from = big_h.vars();
        let mode = if eta_bar.entry(z).set_zero(&[z]).is_zero() {
            DescentMode::TildeDiv
        } else {
            DescentMode::Tilde
        };
        let (class_x, class_z, shift_z) = match mode {
            DescentMode::Tilde => (k - 1, 0, 0),
            DescentMode::TildeDiv => (0, 1 % k, 1),
        };
        let mut entries = Vec::with_capacity(from.len());
        for (i, e) in eta_bar.entries().iter().enumerate() {
            let (class, shift) = if i == z { (class_z, shift_z) } else { (class_x, class_x) };
            let q = descend_class(e, z, k, class, shift, from);
            let scaled = match (mode, i == z) {
                (DescentMode::Tilde, false) => q.scale(&self.k_rat().recip()),
                (DescentMode::TildeDiv, true) => {
                    let lam = Polynomial::var_at(from, z);
                    (&q * &lam).scale(&self.k_rat())
                }
                _ => q,
            };
            entries.push(scaled);
        }
        let eta = VectorField::new(from, entries)?;
        let quotient = big_h.quotient(&eta)?.ok_or_else(|| {
            Error::DescentResidue(format!("retained field {eta} is not logarithmic along H"))
        })?;
        let retained = match mode {
            DescentMode::Tilde => self.tilde(&eta)?,
            DescentMode::TildeDiv => self.tilde_div(&eta)?,
        };
        let remainder = VectorField::from_element(eta_bar.as_element().try_sub(retained.as_element())?)?;
        if h.quotient(&remainder)?.is_none() {
            return Err(Error::DescentResidue(format!(
                "discarded part {remainder} is not logarithmic along h"
            )));
        }
        Ok(Descent {
            mode,
            eta,
            remainder,
            quotient,
        })
    }
}

/// Terms of `p` whose `Z`-exponent is `≡ class (mod k)`, written as
/// `Z^shift · Q(X, Z^k)`; returns `Q(X, Λ)` over `to`.
fn descend_class(p: &Polynomial, z: usize, k: u32, class: u32, shift: u32, to: &Arc<VarSet>) -> Polynomial {
    let terms = p
        .terms()
        .iter()
        .filter(|(m, _)| m.exps()[z] % k == class && m.exps()[z] >= shift)
        .map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e[z] = (e[z] - shift) / k;
            (Monomial::from_exps(&e), c.clone())
        });
    Polynomial::from_terms(to, terms)
}

fn fresh(vars: &VarSet, stem: &str) -> String {
    std::iter::once(stem.to_string())
        .chain((1..).map(|i| format!("{stem}{i}")))
        .find(|n| vars.index_of(n).is_none())
        .expect("unbounded search")
}

fn append(vars: &VarSet, name: &str, weight: Option<u32>) -> Result<Arc<VarSet>> {
    let mut names = vars.names().to_vec();
    names.push(name.to_string());
    let weights = match (vars.weights(), weight) {
        (Some(w), Some(x)) => {
            let mut w = w.to_vec();
            w.push(x);
            Some(w)
        }
        _ => None,
    };
    VarSet::build(names, weights)
}

/// `π₂ ∘ i*`: the ideal of `η_z(X, 0)` over the generators, in the ring
/// without the coordinate `z`.
pub fn pi2_istar(m: &Submodule, z: usize) -> Result<Submodule> {
    let vars = m.vars();
    let keep: Vec<usize> = (0..vars.len()).filter(|&i| i != z).collect();
    let sub = vars.select(&keep)?;
    let gens = m
        .generators()
        .iter()
        .map(|g| g.entry(z).set_zero(&[z]).embed(&sub))
        .collect::<Result<Vec<_>>>()?;
    Submodule::ideal(&sub, gens.into_iter().filter(|p| !p.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::Engine;

    fn p(s: &str, r: &Arc<VarSet>) -> Polynomial {
        Polynomial::parse(s, r).unwrap()
    }

    fn field(space: &Arc<VarSet>, xs: &[&str]) -> VectorField {
        VectorField::new(space, xs.iter().map(|c| p(c, space)).collect()).unwrap()
    }

    const H: &str = "256*X^3 + 27*Y^4 + 144*X*Y^2*Z + 128*X^2*Z^2 + 4*Y^2*Z^3 + 16*X*Z^4";

    fn swallowtail() -> Unfolding {
        let s = VarSet::with_weights(["x", "y", "z"], vec![1, 3, 2]).unwrap();
        let t = VarSet::with_weights(["X", "Y", "Z"], vec![4, 3, 2]).unwrap();
        let cs = VarSet::with_weights(["x", "y"], vec![1, 3]).unwrap();
        let ct = VarSet::with_weights(["X", "Y"], vec![4, 3]).unwrap();
        let f = MapGerm::new(&cs, &ct, vec![p("x^4 + y*x", &cs), p("y", &cs)]).unwrap();
        let big = MapGerm::new(&s, &t, vec![p("x^4 + y*x + z*x^2", &s), p("y", &s), p("z", &s)]).unwrap();
        Unfolding::new(big, vec![2], vec![2], f).unwrap()
    }

    fn etas(t: &Arc<VarSet>) -> [VectorField; 3] {
        [
            field(t, &["4*X", "3*Y", "2*Z"]),
            field(t, &["-(9*Y^2 + 16*X*Z)", "12*Y*Z", "48*X + 4*Z^2"]),
            field(t, &["Y*Z", "-(8*X + 2*Z^2)", "6*Y"]),
        ]
    }

    #[test]
    fn augmented_maps() {
        let u = swallowtail();
        let a2 = AugmentationSpec::new(&u, 2).unwrap();
        let m = a2.augmented();
        assert_eq!(m.component(0), &p("x^4 + y*x + z^2*x^2", m.source()));
        assert!(m.is_quasihomogeneous());
        assert_eq!(m.target().weights(), Some(&[8, 6, 2][..]));
        let a1 = AugmentationSpec::new(&u, 1).unwrap();
        assert_eq!(a1.augmented(), u.total());

        let af = a2.build_af().unwrap();
        assert_eq!(af.total().component(0).to_string(), "x^4 + x*y + x^2*z^2 + x^2*mu");
        assert_eq!(af.core(), a2.augmented());
    }

    #[test]
    fn tilde_transforms() {
        let u = swallowtail();
        let t = u.total().target().clone();
        let [e1, e2, e3] = etas(&t);
        let a = AugmentationSpec::new(&u, 2).unwrap();
        let tt = a.augmented().target().clone();
        assert_eq!(
            a.tilde(&e2).unwrap(),
            field(&tt, &["-(18*Y^2*Z + 32*X*Z^3)", "24*Y*Z^3", "48*X + 4*Z^4"])
        );
        let k_e1 = VectorField::from_element(e1.as_element().scale(&int(2))).unwrap();
        assert_eq!(a.tilde_div(&k_e1).unwrap(), field(&tt, &["8*X", "6*Y", "2*Z"]));
        let y = p("Y", &t);
        let x = p("X", &t);
        let xi = e2.as_element().mul_poly(&y.scale(&int(2))).unwrap()
            .try_sub(&e3.as_element().mul_poly(&x.scale(&int(16))).unwrap())
            .unwrap();
        let xi = VectorField::from_element(xi).unwrap();
        assert_eq!(
            a.tilde_div(&xi).unwrap(),
            field(&tt, &["-(18*Y^3 + 48*X*Y*Z^2)", "128*X^2 + 24*Y^2*Z^2 + 32*X*Z^4", "4*Y*Z^3"])
        );
        assert!(matches!(a.tilde_div(&e2), Err(Error::NotDivisible(_))));

        let a1 = AugmentationSpec::new(&u, 1).unwrap();
        assert_eq!(a1.tilde(&e3).unwrap(), e3);
    }

    #[test]
    fn descent_inverts_tilde() {
        let u = swallowtail();
        let t = u.total().target().clone();
        let big_h = Divisor::new(p(H, &t)).unwrap();
        let [e1, e2, e3] = etas(&t);
        for k in 1..=3 {
            let a = AugmentationSpec::new(&u, k).unwrap();
            for e in [&e2, &e3] {
                let d = a.descend(&a.tilde(e).unwrap(), &big_h).unwrap();
                assert_eq!(&d.eta, e);
                assert!(d.remainder.is_zero());
            }
            let k_e1 = VectorField::from_element(e1.as_element().scale(&int(i64::from(k)))).unwrap();
            let d = a.descend(&a.tilde_div(&k_e1).unwrap(), &big_h).unwrap();
            assert_eq!(d.mode, DescentMode::TildeDiv);
            assert_eq!(d.eta, k_e1);
        }
    }

    #[test]
    fn descent_of_fourth_generator() {
        let u = swallowtail();
        let t = u.total().target().clone();
        let big_h = Divisor::new(p(H, &t)).unwrap();
        let a = AugmentationSpec::new(&u, 2).unwrap();
        let tt = a.augmented().target().clone();
        let eta4 = field(&tt, &["-(18*Y^3 + 48*X*Y*Z^2)", "128*X^2 + 24*Y^2*Z^2 + 32*X*Z^4", "4*Y*Z^3"]);
        let d = a.descend(&eta4, &big_h).unwrap();
        assert_eq!(
            d.eta,
            field(&t, &["-18*Y^3 - 48*X*Y*Z", "128*X^2 + 32*X*Z^2 + 24*Y^2*Z", "8*Y*Z^2"])
        );
        assert!(d.eta.entry(2).set_zero(&[2]).is_zero());
    }

    #[test]
    fn pi2_of_swallowtail() {
        let u = swallowtail();
        let t = u.total().target().clone();
        let m = Submodule::new(&t, 3, etas(&t).iter().map(|e| e.as_element().clone()).collect()).unwrap();
        let i = pi2_istar(&m, 2).unwrap();
        let xy = VarSet::with_weights(["X", "Y"], vec![4, 3]).unwrap();
        let expected = Submodule::ideal(&xy, vec![p("X", &xy), p("Y", &xy)]).unwrap();
        assert!(Engine::default().equal(&i, &expected).unwrap());
        assert!(pi2_istar(&Submodule::zero(&t, 3), 2).unwrap().is_empty());
    }
}
