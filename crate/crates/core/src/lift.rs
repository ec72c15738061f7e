//! Liftable vector fields: certificates, the module `G`, and the unfolding
//! pipeline `Lift(f) = π₁(i*(Lift(F) ∩ G))`.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::germ::{MapGerm, Unfolding, VectorField};
use crate::groebner::{Engine, Membership, ModuleElement, Submodule};
use crate::poly::{Polynomial, Rational, VarSet};

/// A pair `(η, ξ)` with `df · ξ = η ∘ f`, checked on construction.
#[derive(Clone, Debug)]
pub struct LiftCertificate {
    germ: MapGerm,
    eta: VectorField,
    xi: VectorField,
}

impl LiftCertificate {
    pub fn new(germ: &MapGerm, eta: VectorField, xi: VectorField) -> Result<Self> {
        let lhs = germ.tf(&xi)?;
        let rhs = germ.wf(&eta)?;
        if lhs != rhs {
            return Err(Error::CertificateInvalid(format!(
                "df·ξ = {lhs} but η∘f = {rhs}"
            )));
        }
        Ok(LiftCertificate {
            germ: germ.clone(),
            eta,
            xi,
        })
    }

    pub fn germ(&self) -> &MapGerm {
        &self.germ
    }

    pub fn eta(&self) -> &VectorField {
        &self.eta
    }

    pub fn xi(&self) -> &VectorField {
        &self.xi
    }

    /// Re-expands the defining identity.
    pub fn verify(&self) -> bool {
        matches!(
            (self.germ.tf(&self.xi), self.germ.wf(&self.eta)),
            (Ok(a), Ok(b)) if a == b
        )
    }
}

#[derive(Clone, Debug)]
pub enum LiftVerdict {
    Certified(LiftCertificate),
    /// `η ∘ f` is not in the polynomial module `tf(θ_n)`; `normal_form` is
    /// the nonzero remainder. When `conclusive`, the germ is quasihomogeneous
    /// so the module is graded and the answer also holds for germs.
    NotPolynomiallyLiftable {
        normal_form: ModuleElement,
        conclusive: bool,
    },
}

impl LiftVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, LiftVerdict::Certified(_))
    }

    pub fn certificate(&self) -> Option<&LiftCertificate> {
        match self {
            LiftVerdict::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Reusable liftability test for one germ; the Gröbner bases of `tf(θ_n)`
/// are computed once.
#[derive(Clone, Debug)]
pub struct LiftChecker {
    germ: MapGerm,
    tf: Submodule,
    graded: bool,
}

impl LiftChecker {
    pub fn new(germ: &MapGerm) -> Self {
        LiftChecker {
            germ: germ.clone(),
            tf: germ.tf_generators(),
            graded: germ.is_quasihomogeneous(),
        }
    }

    pub fn germ(&self) -> &MapGerm {
        &self.germ
    }

    pub fn check(&self, engine: &Engine, eta: &VectorField) -> Result<LiftVerdict> {
        let target = self.germ.wf(eta)?;
        match engine.express(&self.tf, &target)? {
            Membership::Member(coeffs) => {
                let xi = VectorField::new(self.germ.source(), coeffs)?;
                Ok(LiftVerdict::Certified(LiftCertificate::new(&self.germ, eta.clone(), xi)?))
            }
            Membership::NotMember(nf) => Ok(LiftVerdict::NotPolynomiallyLiftable {
                normal_form: nf,
                conclusive: self.graded,
            }),
        }
    }
}

pub fn is_liftable(engine: &Engine, f: &MapGerm, eta: &VectorField) -> Result<LiftVerdict> {
    LiftChecker::new(f).check(engine, eta)
}

/// Polynomial liftable fields computed directly from the graph: the
/// `x`-free part of the module over `K[x, X]` generated by the columns of
/// `df` and `(X_i − f_i) e_j`. For quasihomogeneous germs this generates the
/// germ module.
pub fn lift_direct(engine: &Engine, f: &MapGerm) -> Result<Submodule> {
    let joint = f.graph_ring()?;
    let p = f.target().len();
    let mut gens = Vec::new();
    for col in f.tf_generators().generators() {
        gens.push(col.embed(&joint)?);
    }
    for (i, c) in f.components().iter().enumerate() {
        let rel = &Polynomial::var(&joint, f.target().name(i))? - &c.embed(&joint)?;
        for j in 0..p {
            gens.push(ModuleElement::unit(&joint, p, j).mul_poly(&rel)?);
        }
    }
    let elim: Vec<&str> = f.source().names().iter().map(String::as_str).collect();
    let m = engine.eliminate(&Submodule::new(&joint, p, gens)?, &elim)?;
    let gens = m
        .generators()
        .iter()
        .map(|g| g.try_map(|e| e.rebase(f.target())))
        .collect::<Result<Vec<_>>>()?;
    prune(engine, &Submodule::new(f.target(), p, gens)?)
}

/// `∂/∂X_k` for the non-parameter coordinates and `Λ_i ∂/∂Λ_j` for all
/// pairs of parameter coordinates.
pub fn build_g(u: &Unfolding) -> Submodule {
    let t = u.total().target();
    let rank = t.len();
    let mut gens: Vec<ModuleElement> = u
        .target_core_indices()
        .into_iter()
        .map(|k| ModuleElement::unit(t, rank, k))
        .collect();
    for &j in u.target_params() {
        for &i in u.target_params() {
            let mut e = ModuleElement::zero(t, rank).into_entries();
            e[j] = Polynomial::var_at(t, i);
            gens.push(ModuleElement::new(t, e).expect("same ring"));
        }
    }
    Submodule::new(t, rank, gens).expect("valid generators")
}

/// `π₁ ∘ i*`: set the parameters to zero and keep the non-parameter
/// components, as a field on the core germ's target.
pub fn phi_project(eta: &VectorField, u: &Unfolding) -> Result<VectorField> {
    if eta.space() != u.total().target() {
        return Err(Error::ambient(format!(
            "field over ({}) for an unfolding with target ({})",
            eta.space(),
            u.total().target()
        )));
    }
    let core_t = u.core().target();
    let entries = u
        .target_core_indices()
        .iter()
        .map(|&i| restrict_to_core(eta.entry(i), u, core_t))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(core_t, entries)
}

fn restrict_to_core(p: &Polynomial, u: &Unfolding, core_t: &Arc<VarSet>) -> Result<Polynomial> {
    let zeroed = p.set_zero(u.target_params());
    let keep = u.target_core_indices();
    let mid = u.total().target().select(&keep)?;
    zeroed.embed(&mid)?.rebase(core_t)
}

/// Canonical presentation: primitive, nonzero, deduplicated, sorted, and
/// without generators that lie in the span of the others. Equality with the
/// input module is re-checked.
pub fn prune(engine: &Engine, m: &Submodule) -> Result<Submodule> {
    let mut gens: Vec<ModuleElement> = m
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .map(ModuleElement::primitive)
        .collect();
    gens.sort_by_key(canonical_key);
    gens.dedup();
    let mut i = gens.len();
    while i > 0 {
        i -= 1;
        let others: Vec<ModuleElement> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let rest = Submodule::new(m.vars(), m.rank(), others.clone())?;
        if engine.contains(&rest, &gens[i])? {
            gens = others;
        }
    }
    let out = Submodule::new(m.vars(), m.rank(), gens)?;
    if !engine.contains_module(&out, m)? {
        return Err(Error::CertificateInvalid("pruning changed the module".into()));
    }
    Ok(out)
}

fn canonical_key(g: &ModuleElement) -> (u64, usize, String) {
    let deg = g
        .entries()
        .iter()
        .filter_map(|e| e.degree())
        .max()
        .unwrap_or(0);
    let terms = g.entries().iter().map(Polynomial::len).sum();
    (deg, terms, g.to_string())
}

/// Result of [`lift_from_unfolding`].
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    /// `Lift(F) ∩ G` as computed.
    pub intersection: Submodule,
    /// Pruned generators of `Lift(f)`.
    pub module: Submodule,
    /// One certificate per generator of `module`, against the core germ.
    pub certificates: Vec<LiftCertificate>,
}

/// `Lift(f) = π₁(i*(Lift(F) ∩ G))`. Every input generator is first checked
/// to lift over `F`, and every output generator is certified over `f`.
pub fn lift_from_unfolding(engine: &Engine, u: &Unfolding, lift_f: &Submodule) -> Result<PipelineOutput> {
    let total = u.total();
    if lift_f.vars() != total.target() || lift_f.rank() != total.target().len() {
        return Err(Error::ambient(format!(
            "Lift(F) must be a module over the unfolding target ({})",
            total.target()
        )));
    }
    let checker = LiftChecker::new(total);
    for (index, g) in lift_f.generators().iter().enumerate() {
        let eta = VectorField::from_element(g.clone())?;
        if !checker.check(engine, &eta)?.is_certified() {
            return Err(Error::InputNotLiftable { index });
        }
    }
    let intersection = if u.parameter_count() == 0 {
        lift_f.clone()
    } else {
        engine.module_intersect(lift_f, &build_g(u))?
    };
    let core_t = u.core().target();
    let projected = intersection
        .generators()
        .iter()
        .map(|g| Ok(phi_project(&VectorField::from_element(g.clone())?, u)?.into_element()))
        .collect::<Result<Vec<_>>>()?;
    let module = prune(engine, &Submodule::new(core_t, core_t.len(), projected)?)?;
    let core_checker = LiftChecker::new(u.core());
    let mut certificates = Vec::with_capacity(module.len());
    for (index, g) in module.generators().iter().enumerate() {
        match core_checker.check(engine, &VectorField::from_element(g.clone())?)? {
            LiftVerdict::Certified(c) => certificates.push(c),
            _ => return Err(Error::OutputNotCertified { index }),
        }
    }
    Ok(PipelineOutput {
        intersection,
        module,
        certificates,
    })
}

/// A basis (reduced row echelon form) of the span of `{η(0)}`.
pub fn tau_tilde(m: &Submodule) -> Vec<Vec<Rational>> {
    let origin = vec![Rational::zero(); m.vars().len()];
    let rows: Vec<Vec<Rational>> = m
        .generators()
        .iter()
        .map(|g| g.entries().iter().map(|e| e.evaluate(&origin)).collect())
        .collect();
    row_echelon(rows, m.rank())
}

fn row_echelon(mut rows: Vec<Vec<Rational>>, width: usize) -> Vec<Vec<Rational>> {
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}
